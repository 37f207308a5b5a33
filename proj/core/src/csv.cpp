#include "drselect/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace drselect {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(f, line)) throw ParseError(path + " is empty");
  for (const std::string& h : split_line(line)) {
    const std::string name = trim(h);
    if (name.empty()) throw SchemaError(path + ": empty column name in header");
    table.header.push_back(name);
  }
  std::set<std::string> seen;
  for (const std::string& h : table.header) {
    if (!seen.insert(h).second) {
      throw SchemaError(path + ": duplicate column name '" + h + "'");
    }
  }

  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != table.header.size()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(table.header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      if (cell.empty()) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": missing value in column '" + table.header[c] + "'");
      }
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      if (errno != 0 || end != cell.c_str() + cell.size()) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": non-numeric value '" + cell + "' in column '" +
                         table.header[c] + "'");
      }
      row[c] = v;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Dataset dataset_from_csv(const CsvTable& table, const std::string& outcome,
                         const std::string& treatment,
                         const std::vector<std::string>& covariates) {
  auto column_index = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
      throw SchemaError("column '" + name + "' not found in input");
    }
    return size_t(it - table.header.begin());
  };

  if (outcome == treatment) {
    throw SchemaError("outcome and treatment columns must be distinct");
  }
  const size_t yc = column_index(outcome);
  const size_t ac = column_index(treatment);

  std::vector<size_t> xcols;
  std::vector<std::string> names{"(intercept)"};
  if (covariates.empty()) {
    for (size_t c = 0; c < table.header.size(); ++c) {
      if (c != yc && c != ac) {
        xcols.push_back(c);
        names.push_back(table.header[c]);
      }
    }
  } else {
    for (const std::string& name : covariates) {
      const size_t c = column_index(name);
      if (c == yc || c == ac) {
        throw SchemaError("covariate '" + name +
                          "' duplicates the outcome or treatment column");
      }
      xcols.push_back(c);
      names.push_back(name);
    }
  }
  if (xcols.empty()) throw SchemaError("no covariate columns");

  const Eigen::Index n = Eigen::Index(table.rows.size());
  if (n < 2) throw SchemaError("need at least two data rows");
  Dataset d;
  d.y.resize(n);
  d.a.resize(n);
  d.x.resize(n, Eigen::Index(xcols.size()) + 1);
  d.column_names = std::move(names);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[size_t(i)];
    d.y[i] = row[yc];
    const double av = row[ac];
    if (av != 0.0 && av != 1.0) {
      throw SchemaError("treatment column '" + treatment +
                        "' is not binary at data row " + std::to_string(i + 1));
    }
    d.a[i] = av;
    d.x(i, 0) = 1.0;
    for (size_t c = 0; c < xcols.size(); ++c) {
      d.x(i, Eigen::Index(c) + 1) = row[xcols[c]];
    }
  }
  d.validate(true);
  return d;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << "Y,A";
  for (Eigen::Index j = 1; j < data.p(); ++j) {
    f << ',' << data.column_names[size_t(j)];
  }
  f << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << buf;
  };
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    put(data.y[i]);
    f << ',' << (data.a[i] == 1.0 ? '1' : '0');
    for (Eigen::Index j = 1; j < data.p(); ++j) {
      f << ',';
      put(data.x(i, j));
    }
    f << '\n';
  }
}

}  // namespace drselect
