#include "mixtopic/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mixtopic/errors.hpp"

namespace mixtopic {

namespace {

bool is_blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (ch != ' ' && ch != '\t' && ch != '\r') return false;
  }
  return true;
}

// Splits a line into whitespace-separated integer fields; any non-integer
// token is a parse error.
bool split_ints(const std::string& line, std::vector<long long>& out) {
  out.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p >= end) break;
    long long value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      return false;
    }
    out.push_back(value);
    p = next;
  }
  return true;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line_no << ": " << what;
  throw ParseError(os.str());
}

}  // namespace

Schemas parse_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open meta file: " + path);

  // (type_id, feature_id) -> state_count
  std::map<int, std::map<int, int>> grouped;
  std::string line;
  std::vector<long long> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    if (!split_ints(line, fields)) parse_fail(path, line_no, "non-integer field");
    if (fields.size() != 3) {
      parse_fail(path, line_no, "expected 3 fields (type_id feature_id state_count), got " +
                                    std::to_string(fields.size()));
    }
    const long long t = fields[0], w = fields[1], s = fields[2];
    if (t < 1 || w < 1) parse_fail(path, line_no, "type_id and feature_id must be >= 1");
    if (s < 1) parse_fail(path, line_no, "state_count must be >= 1");
    auto& features = grouped[static_cast<int>(t)];
    if (!features.emplace(static_cast<int>(w), static_cast<int>(s)).second) {
      parse_fail(path, line_no, "duplicate (type_id, feature_id) = (" + std::to_string(t) +
                                    ", " + std::to_string(w) + ")");
    }
  }

  if (grouped.empty()) throw SchemaError(path + ": no types defined");

  Schemas schemas;
  int expected_type = 1;
  for (const auto& [type_id, features] : grouped) {
    if (type_id != expected_type) {
      throw SchemaError(path + ": type ids must be contiguous from 1; missing type " +
                        std::to_string(expected_type));
    }
    ++expected_type;

    int expected_feature = 1;
    bool any_multi = false, any_single = false;
    for (const auto& [feature_id, states] : features) {
      if (feature_id != expected_feature) {
        throw SchemaError(path + ": feature ids of type " + std::to_string(type_id) +
                          " must be contiguous from 1; missing feature " +
                          std::to_string(expected_feature));
      }
      ++expected_feature;
      (states >= 2 ? any_multi : any_single) = true;
    }

    if (any_multi && any_single) {
      throw SchemaError(path + ": type " + std::to_string(type_id) +
                        " mixes state_count = 1 features with state_count >= 2 features");
    }

    TypeSchema ts;
    ts.type_id = type_id;
    ts.feature_count = static_cast<int>(features.size());
    ts.kind = any_multi ? TypeKind::lab : TypeKind::regular;
    if (any_multi) {
      if (schemas.lab_type_id != 0) {
        throw SchemaError(path + ": more than one lab type (types " +
                          std::to_string(schemas.lab_type_id) + " and " +
                          std::to_string(type_id) + ")");
      }
      schemas.lab_type_id = type_id;
      for (const auto& [feature_id, states] : features) {
        schemas.labs.push_back(LabSchema{feature_id, states});
      }
    }
    schemas.types.push_back(ts);
  }
  return schemas;
}

Corpus parse_corpus(const std::string& data_path, const Schemas& schemas,
                    const ParseOptions& opts, long* skipped_rows) {
  std::ifstream in(data_path);
  if (!in) throw IoError("cannot open data file: " + data_path);

  Corpus corpus;
  corpus.schemas = schemas;

  const int type_count = static_cast<int>(schemas.types.size());
  std::unordered_map<long long, std::size_t> patient_index;

  // Per patient: merged token and lab-value counts, keyed for dedup.
  std::vector<std::map<std::pair<int, int>, long>> token_acc;
  std::vector<std::map<std::pair<int, int>, long>> lab_acc;

  long skipped = 0;
  std::string line;
  std::vector<long long> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    if (!split_ints(line, fields)) parse_fail(data_path, line_no, "non-integer field");
    if (fields.size() != 5) {
      parse_fail(data_path, line_no,
                 "expected 5 fields (patient_id type_id feature_id state_id count), got " +
                     std::to_string(fields.size()));
    }
    const long long j = fields[0];
    const long long t = fields[1], w = fields[2], v = fields[3], cnt = fields[4];

    if (cnt <= 0) {
      throw ValidationError(data_path + ":" + std::to_string(line_no) +
                            ": count must be >= 1, got " + std::to_string(cnt));
    }

    bool known = t >= 1 && t <= type_count;
    bool is_lab = known && schemas.types[static_cast<std::size_t>(t - 1)].kind == TypeKind::lab;
    if (known) {
      const TypeSchema& ts = schemas.types[static_cast<std::size_t>(t - 1)];
      if (w < 1 || w > ts.feature_count) known = false;
      if (known && is_lab) {
        const LabSchema& ls = schemas.labs[static_cast<std::size_t>(w - 1)];
        if (v < 1 || v > ls.value_count) known = false;
      }
      if (known && !is_lab && v != 1) {
        throw ValidationError(data_path + ":" + std::to_string(line_no) +
                              ": state_id must be 1 for regular type " + std::to_string(t));
      }
    }
    if (!known) {
      if (opts.skip_unknown) {
        ++skipped;
        continue;
      }
      throw ValidationError(data_path + ":" + std::to_string(line_no) +
                            ": id out of schema range (type " + std::to_string(t) +
                            ", feature " + std::to_string(w) + ", state " + std::to_string(v) +
                            ")");
    }

    auto [it, inserted] = patient_index.emplace(j, corpus.patients.size());
    if (inserted) {
      corpus.patients.push_back(PatientRecord{j, {}, {}});
      token_acc.emplace_back();
      lab_acc.emplace_back();
    }
    const std::size_t pj = it->second;
    if (is_lab) {
      lab_acc[pj][{static_cast<int>(w), static_cast<int>(v)}] += cnt;
    } else {
      token_acc[pj][{static_cast<int>(t), static_cast<int>(w)}] += cnt;
    }
  }

  for (std::size_t pj = 0; pj < corpus.patients.size(); ++pj) {
    PatientRecord& rec = corpus.patients[pj];
    rec.tokens.reserve(token_acc[pj].size());
    for (const auto& [key, cnt] : token_acc[pj]) {
      rec.tokens.push_back(RegularToken{key.first, key.second, cnt});
    }
    // lab_acc is ordered by (lab, value), so build runs per lab.
    for (const auto& [key, cnt] : lab_acc[pj]) {
      if (rec.labs.empty() || rec.labs.back().lab_id != key.first) {
        rec.labs.push_back(LabObservation{key.first, {}});
      }
      rec.labs.back().values.push_back(LabValueCount{key.second, cnt});
    }
  }

  if (skipped_rows) *skipped_rows = skipped;
  return corpus;
}

CorpusSummary corpus_summary(const Corpus& c) {
  CorpusSummary s;
  s.patients = c.patient_count();
  s.regular_types = c.schemas.regular_type_count();
  s.lab_tests = c.schemas.lab_count();
  for (const TypeSchema& ts : c.schemas.types) {
    if (ts.kind == TypeKind::regular) s.feature_total += ts.feature_count;
  }
  for (const PatientRecord& rec : c.patients) {
    for (const RegularToken& tok : rec.tokens) s.token_total += tok.count;
    for (const LabObservation& lab : rec.labs) {
      ++s.observed_pairs;
      s.lab_result_total += lab.total();
    }
  }
  const double cells = static_cast<double>(s.patients) * static_cast<double>(s.lab_tests);
  s.observation_rate = cells > 0 ? static_cast<double>(s.observed_pairs) / cells : 0.0;
  return s;
}

void write_meta(const Schemas& schemas, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write meta file: " + path);
  for (const TypeSchema& ts : schemas.types) {
    if (ts.kind == TypeKind::lab) {
      for (const LabSchema& ls : schemas.labs) {
        out << ts.type_id << ' ' << ls.lab_id << ' ' << ls.value_count << '\n';
      }
    } else {
      for (int w = 1; w <= ts.feature_count; ++w) {
        out << ts.type_id << ' ' << w << ' ' << 1 << '\n';
      }
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_data(const Corpus& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write data file: " + path);
  const int lab_type = c.schemas.lab_type_id;
  for (const PatientRecord& rec : c.patients) {
    for (const RegularToken& tok : rec.tokens) {
      out << rec.patient_id << ' ' << tok.type_id << ' ' << tok.feature_id << " 1 " << tok.count
          << '\n';
    }
    for (const LabObservation& lab : rec.labs) {
      for (const LabValueCount& vc : lab.values) {
        out << rec.patient_id << ' ' << lab_type << ' ' << lab.lab_id << ' ' << vc.value << ' '
            << vc.count << '\n';
      }
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

std::uint64_t schema_hash(const Schemas& schemas) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](long long x) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  for (const TypeSchema& ts : schemas.types) {
    mix(ts.type_id);
    mix(ts.feature_count);
    mix(ts.kind == TypeKind::lab ? 2 : 1);
  }
  for (const LabSchema& ls : schemas.labs) {
    mix(ls.lab_id);
    mix(ls.value_count);
  }
  return h;
}

}  // namespace mixtopic
