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

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "ldps/mech.hpp"

namespace ldps::io {

// 17 significant digits; round-trips every double exactly.
std::string format_double(double x);

// Single-column CSV with the given header.
void write_series_csv(std::ostream& os, const std::string& header,
                      const Eigen::VectorXd& values);
void write_series_csv(const std::string& path, const std::string& header,
                      const Eigen::VectorXd& values);
Eigen::VectorXd read_series_csv(std::istream& is);
Eigen::VectorXd read_series_csv(const std::string& path);

// Transcript files carry `# key=value` metadata lines, then a CSV header
// naming the populated channels (z, zbar, ztilde, zcheck_0..zcheck_K) and
// one row per index; channels that start later than index 1 leave early
// fields empty.
void write_transcript_csv(std::ostream& os, const mech::Transcript& t);
void write_transcript_csv(const std::string& path, const mech::Transcript& t);
mech::Transcript read_transcript_csv(std::istream& is);
mech::Transcript read_transcript_csv(const std::string& path);

}  // namespace ldps::io
