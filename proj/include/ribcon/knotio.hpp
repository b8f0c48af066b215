#pragma once
// Knot table files: JSON (canonical) and CSV ingestion.

#include "ribcon/obstruct.hpp"

#include <fstream>
#include <sstream>

namespace ribcon {

struct TableLoadResult {
  std::vector<KnotRecord> records;
  std::vector<std::string> errors;  // per-record load failures
};

inline IntMatrix matrix_from_json(const json& rows) {
  int n = (int)rows.size();
  IntMatrix m(n, n);
  for (int i = 0; i < n; i++) {
    if ((int)rows[i].size() != n) throw std::domain_error("seifert matrix is not square");
    for (int j = 0; j < n; j++) {
      if (rows[i][j].is_number_integer())
        m(i, j) = Int(rows[i][j].get<long>());
      else
        m(i, j) = Int(rows[i][j].get<std::string>());
    }
  }
  return m;
}

inline std::optional<PDCode> pd_from_json(const json& arr) {
  if (arr.is_string()) return parse_pd(arr.get<std::string>());
  PDCode pd;
  for (auto& x : arr) {
    if (x.size() != 4) return std::nullopt;
    pd.crossings.push_back(
        {x[0].get<int>(), x[1].get<int>(), x[2].get<int>(), x[3].get<int>()});
  }
  if (!pd.valid()) return std::nullopt;
  return pd;
}

inline TableLoadResult load_table_json(const std::string& text) {
  TableLoadResult out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    out.errors.push_back(std::string("JSON parse error: ") + e.what());
    return out;
  }
  const json& list = doc.contains("knots") ? doc["knots"] : doc;
  if (!list.is_array()) {
    out.errors.push_back("expected a top-level array or a 'knots' array");
    return out;
  }
  std::set<std::string> names;
  for (auto& entry : list) {
    try {
      std::string name = entry.at("name").get<std::string>();
      if (!names.insert(name).second) throw std::domain_error("duplicate name " + name);
      IntMatrix m = matrix_from_json(entry.at("seifert"));
      std::optional<PDCode> pd;
      if (entry.contains("pd") && !entry["pd"].is_null()) {
        pd = pd_from_json(entry["pd"]);
        if (!pd) throw std::domain_error("invalid PD code");
        if (pd->crossings.empty() && m.rows > 0) pd = std::nullopt;
      }
      out.records.emplace_back(name, SeifertMatrix(m), pd);
    } catch (const std::exception& e) {
      out.errors.push_back(std::string("record error: ") + e.what());
    }
  }
  return out;
}

// CSV: name,size,entries(semicolon-separated row-major),pd(optional PD[--] text)
inline TableLoadResult load_table_csv(const std::string& text) {
  TableLoadResult out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> names;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    // name,size,entries[,pd] -- the PD text may itself contain commas, so
    // only the first three commas delimit fields
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',' && fields.size() < 3) {
        fields.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    fields.push_back(cur);
    try {
      if (fields.size() < 3) throw std::domain_error("need name,size,entries");
      std::string name = fields[0];
      if (!names.insert(name).second) throw std::domain_error("duplicate name " + name);
      int n = std::stoi(fields[1]);
      IntMatrix m(n, n);
      {
        std::istringstream es(fields[2]);
        std::string tok;
        int cnt = 0;
        while (std::getline(es, tok, ';')) {
          if (tok.empty()) continue;
          if (cnt >= n * n) throw std::domain_error("too many entries");
          m(cnt / n, cnt % n) = Int(tok);
          cnt++;
        }
        if (cnt != n * n) throw std::domain_error("wrong entry count");
      }
      std::optional<PDCode> pd;
      if (fields.size() >= 4 && !fields[3].empty()) {
        pd = parse_pd(fields[3]);
        if (!pd) throw std::domain_error("invalid PD code");
      }
      out.records.emplace_back(name, SeifertMatrix(m), pd);
    } catch (const std::exception& e) {
      out.errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline TableLoadResult load_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    TableLoadResult r;
    r.errors.push_back("cannot open " + path);
    return r;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  bool csv = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
  return csv ? load_table_csv(text) : load_table_json(text);
}

inline const KnotRecord* find_record(const std::vector<KnotRecord>& records,
                                     const std::string& name) {
  for (auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace ribcon
