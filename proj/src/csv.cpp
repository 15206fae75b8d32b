// Copyright 2026 The ldp-spectral Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldps/csv.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ldps::io {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("malformed number: " + s);
  return v;
}

}  // namespace

void write_series_csv(std::ostream& os, const std::string& header,
                      const Eigen::VectorXd& values) {
  os << header << "\n";
  for (int i = 0; i < values.size(); ++i) os << format_double(values[i]) << "\n";
}

void write_series_csv(const std::string& path, const std::string& header,
                      const Eigen::VectorXd& values) {
  auto os = open_out(path);
  write_series_csv(os, header, values);
}

Eigen::VectorXd read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty series file");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(parse_double(line));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<int>(values.size()));
}

Eigen::VectorXd read_series_csv(const std::string& path) {
  auto is = open_in(path);
  return read_series_csv(is);
}

void write_transcript_csv(std::ostream& os, const mech::Transcript& t) {
  using model::MechanismKind;
  os << "# mech=" << model::to_string(t.kind) << "\n";
  os << "# n=" << t.n << "\n";
  os << "# alpha=" << format_double(t.alpha) << "\n";
  os << "# tau=" << format_double(t.tau) << "\n";
  os << "# tau_tilde=" << format_double(t.tau_tilde) << "\n";
  switch (t.kind) {
    case MechanismKind::NI:
      os << "z\n";
      for (int i = 0; i < t.n; ++i) os << format_double(t.z[i]) << "\n";
      break;
    case MechanismKind::SI_COV: {
      os << "# j=" << t.j << "\n";
      if (t.j == 0) {
        os << "zbar\n";
        for (int i = 0; i < t.n; ++i) os << format_double(t.aux[i]) << "\n";
        break;
      }
      os << "z,zbar\n";
      for (int i = 0; i < t.n; ++i) {
        os << format_double(t.z[i]) << ",";
        if (i >= t.j) os << format_double(t.aux[i - t.j]);
        os << "\n";
      }
      break;
    }
    case MechanismKind::SI_POINT: {
      os << "# omega=" << format_double(t.omega) << "\n";
      os << "# K=" << t.K << "\n";
      os << "z,ztilde\n";
      for (int i = 0; i < t.n; ++i) {
        os << format_double(t.z[i]) << ",";
        if (i >= t.K) os << format_double(t.aux[i - t.K]);
        os << "\n";
      }
      break;
    }
    case MechanismKind::SI_GLOBAL: {
      os << "# K=" << t.K << "\n";
      os << "z";
      for (int k = 0; k <= t.K; ++k) os << ",zcheck_" << k;
      os << "\n";
      for (int i = 0; i < t.n; ++i) {
        os << format_double(t.z[i]);
        for (int k = 0; k <= t.K; ++k) {
          os << ",";
          if (i >= t.K) os << format_double(t.aux_matrix(i - t.K, k));
        }
        os << "\n";
      }
      break;
    }
  }
}

void write_transcript_csv(const std::string& path, const mech::Transcript& t) {
  auto os = open_out(path);
  write_transcript_csv(os, t);
}

mech::Transcript read_transcript_csv(std::istream& is) {
  using model::MechanismKind;
  std::map<std::string, std::string> meta;
  std::string line;
  std::string header;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("malformed metadata line: " + line);
      meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    header = line;
    break;
  }
  if (header.empty()) throw std::runtime_error("transcript has no header row");
  const auto need = [&meta](const std::string& key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end())
      throw std::runtime_error("transcript missing metadata key: " + key);
    return it->second;
  };

  mech::Transcript t;
  const std::string mech_name = need("mech");
  if (mech_name == "ni") t.kind = MechanismKind::NI;
  else if (mech_name == "si-cov") t.kind = MechanismKind::SI_COV;
  else if (mech_name == "si-point") t.kind = MechanismKind::SI_POINT;
  else if (mech_name == "si-global") t.kind = MechanismKind::SI_GLOBAL;
  else throw std::runtime_error("unknown mechanism: " + mech_name);
  t.n = std::stoi(need("n"));
  t.alpha = parse_double(need("alpha"));
  t.tau = parse_double(need("tau"));
  t.tau_tilde = parse_double(need("tau_tilde"));
  if (t.kind == MechanismKind::SI_COV) t.j = std::stoi(need("j"));
  if (t.kind == MechanismKind::SI_POINT) t.omega = parse_double(need("omega"));
  if (t.kind == MechanismKind::SI_POINT || t.kind == MechanismKind::SI_GLOBAL)
    t.K = std::stoi(need("K"));

  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  if (static_cast<int>(rows.size()) != t.n)
    throw std::runtime_error("transcript row count does not match n");

  const int aux_start =
      t.kind == MechanismKind::SI_COV ? std::max(t.j, 0) : t.K;
  switch (t.kind) {
    case MechanismKind::NI:
      t.z.resize(t.n);
      for (int i = 0; i < t.n; ++i) t.z[i] = parse_double(rows[i][0]);
      break;
    case MechanismKind::SI_COV:
      if (t.j == 0) {
        t.aux.resize(t.n);
        for (int i = 0; i < t.n; ++i) t.aux[i] = parse_double(rows[i][0]);
        break;
      }
      [[fallthrough]];
    case MechanismKind::SI_POINT:
      t.z.resize(t.n);
      t.aux.resize(t.n - aux_start);
      for (int i = 0; i < t.n; ++i) {
        t.z[i] = parse_double(rows[i][0]);
        if (i >= aux_start) t.aux[i - aux_start] = parse_double(rows[i][1]);
      }
      break;
    case MechanismKind::SI_GLOBAL:
      t.z.resize(t.n);
      t.aux_matrix.resize(t.n - t.K, t.K + 1);
      for (int i = 0; i < t.n; ++i) {
        if (static_cast<int>(rows[i].size()) != t.K + 2)
          throw std::runtime_error("transcript row has wrong column count");
        t.z[i] = parse_double(rows[i][0]);
        if (i >= t.K)
          for (int k = 0; k <= t.K; ++k)
            t.aux_matrix(i - t.K, k) = parse_double(rows[i][k + 1]);
      }
      break;
  }
  return t;
}

mech::Transcript read_transcript_csv(const std::string& path) {
  auto is = open_in(path);
  return read_transcript_csv(is);
}

}  // namespace ldps::io
