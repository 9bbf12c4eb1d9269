#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixtopic {

enum class TypeKind { regular, lab };

// One categorical data type from the meta file.
struct TypeSchema {
  int type_id = 0;        // 1-based, contiguous over the corpus
  int feature_count = 0;  // W_t
  TypeKind kind = TypeKind::regular;

  bool operator==(const TypeSchema&) const = default;
};

// One lab test. Lab ids are the feature ids of the (single) lab-kind type.
struct LabSchema {
  int lab_id = 0;       // 1-based, contiguous
  int value_count = 0;  // V_l >= 2

  bool operator==(const LabSchema&) const = default;
};

struct Schemas {
  std::vector<TypeSchema> types;  // indexed by type_id-1, includes the lab type
  std::vector<LabSchema> labs;    // indexed by lab_id-1; empty when no lab type
  int lab_type_id = 0;            // 0 when the corpus has no lab channel

  int regular_type_count() const {
    return static_cast<int>(types.size()) - (lab_type_id > 0 ? 1 : 0);
  }
  int lab_count() const { return static_cast<int>(labs.size()); }

  bool operator==(const Schemas&) const = default;
};

// A distinct (type, feature) entry of one patient, duplicates merged.
struct RegularToken {
  int type_id = 0;
  int feature_id = 0;
  long count = 0;

  bool operator==(const RegularToken&) const = default;
};

struct LabValueCount {
  int value = 0;  // 1..V_l
  long count = 0;

  bool operator==(const LabValueCount&) const = default;
};

// Presence of this record means the test was taken (r = 1); a test with no
// record is unobserved (r = 0).
struct LabObservation {
  int lab_id = 0;
  std::vector<LabValueCount> values;  // sorted by value

  long total() const {
    long s = 0;
    for (const auto& vc : values) s += vc.count;
    return s;
  }

  bool operator==(const LabObservation&) const = default;
};

struct PatientRecord {
  long long patient_id = 0;
  std::vector<RegularToken> tokens;  // sorted by (type_id, feature_id)
  std::vector<LabObservation> labs;  // sorted by lab_id

  bool operator==(const PatientRecord&) const = default;
};

struct Corpus {
  Schemas schemas;
  std::vector<PatientRecord> patients;  // dense index 0..D-1, first-appearance order

  std::size_t patient_count() const { return patients.size(); }

  bool operator==(const Corpus&) const = default;
};

struct CorpusSummary {
  std::size_t patients = 0;        // D
  int regular_types = 0;           // T
  int lab_tests = 0;               // L
  long feature_total = 0;          // sum of W_t over regular types
  long long token_total = 0;       // sum of regular token counts
  long long lab_result_total = 0;  // sum of lab value counts y
  long long observed_pairs = 0;    // (patient, lab) pairs with r = 1
  double observation_rate = 0.0;   // observed_pairs / (D * L); 0 when D*L = 0
};

// Lenient parsing collects alignment problems instead of throwing; used when
// scoring new data against a trained model's schema.
struct ParseOptions {
  bool skip_unknown = false;  // drop out-of-range ids instead of erroring
};

Schemas parse_meta(const std::string& path);
Corpus parse_corpus(const std::string& data_path, const Schemas& schemas,
                    const ParseOptions& opts = {}, long* skipped_rows = nullptr);

CorpusSummary corpus_summary(const Corpus& c);

void write_meta(const Schemas& schemas, const std::string& path);
void write_data(const Corpus& c, const std::string& path);

// FNV-1a over the canonical meta serialization; persisted with models so a
// corpus can be checked against a model before inference.
std::uint64_t schema_hash(const Schemas& schemas);

}  // namespace mixtopic
