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

#include <sstream>

#include "doctest.h"
#include "ldps/csv.hpp"
#include "ldps/procgen.hpp"

using ldps::SeededRng;
using ldps::model::MechanismKind;
using ldps::model::TruncationSchedule;

namespace {

Eigen::VectorXd random_path(int n, int stream) {
  SeededRng rng(1001, stream);
  Eigen::VectorXd path(n);
  for (int i = 0; i < n; ++i) path[i] = rng.normal();
  return path;
}

ldps::mech::Transcript roundtrip(const ldps::mech::Transcript& t) {
  std::ostringstream os;
  ldps::io::write_transcript_csv(os, t);
  std::istringstream is(os.str());
  return ldps::io::read_transcript_csv(is);
}

}  // namespace

TEST_CASE("series CSV roundtrip is exact") {
  const auto path = random_path(33, 1);
  std::ostringstream os;
  ldps::io::write_series_csv(os, "x", path);
  std::istringstream is(os.str());
  const auto back = ldps::io::read_series_csv(is);
  REQUIRE(back.size() == path.size());
  CHECK((back - path).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("transcript roundtrips preserve every channel bit-exactly") {
  const auto path = random_path(24, 2);
  SeededRng rng(5, 5);

  const TruncationSchedule ni{2.0, 2.0, MechanismKind::NI};
  const auto t_ni = ldps::mech::privatize_ni(path, ni, 0.7, rng);
  const auto b_ni = roundtrip(t_ni);
  CHECK(b_ni.kind == MechanismKind::NI);
  CHECK(b_ni.alpha == t_ni.alpha);
  CHECK((b_ni.z - t_ni.z).lpNorm<Eigen::Infinity>() == 0.0);

  const TruncationSchedule sc{2.0, 8.0, MechanismKind::SI_COV};
  const auto t_cov = ldps::mech::privatize_si_cov(path, 3, sc, 0.7, rng);
  const auto b_cov = roundtrip(t_cov);
  CHECK(b_cov.j == 3);
  CHECK((b_cov.z - t_cov.z).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((b_cov.aux - t_cov.aux).lpNorm<Eigen::Infinity>() == 0.0);

  const auto t_cov0 = ldps::mech::privatize_si_cov(path, 0, sc, 0.7, rng);
  const auto b_cov0 = roundtrip(t_cov0);
  CHECK(b_cov0.j == 0);
  CHECK(b_cov0.z.size() == 0);
  CHECK((b_cov0.aux - t_cov0.aux).lpNorm<Eigen::Infinity>() == 0.0);

  const TruncationSchedule sp{2.0, 8.0, MechanismKind::SI_POINT};
  const auto t_pt =
      ldps::mech::privatize_si_point(path, M_PI / 5.0, 4, sp, 0.7, rng);
  const auto b_pt = roundtrip(t_pt);
  CHECK(b_pt.K == 4);
  CHECK(b_pt.omega == t_pt.omega);
  CHECK((b_pt.aux - t_pt.aux).lpNorm<Eigen::Infinity>() == 0.0);

  const TruncationSchedule sg{2.0, 8.0, MechanismKind::SI_GLOBAL};
  const auto t_gl = ldps::mech::privatize_si_global(path, 3, sg, 0.7, rng);
  const auto b_gl = roundtrip(t_gl);
  CHECK(b_gl.K == 3);
  CHECK((b_gl.z - t_gl.z).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((b_gl.aux_matrix - t_gl.aux_matrix).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("malformed transcripts are rejected") {
  std::istringstream empty("");
  CHECK_THROWS_AS(ldps::io::read_transcript_csv(empty), std::runtime_error);
  std::istringstream missing("# mech=ni\nz\n1.0\n");
  CHECK_THROWS_AS(ldps::io::read_transcript_csv(missing), std::runtime_error);
  std::istringstream short_file(
      "# mech=ni\n# n=3\n# alpha=1\n# tau=1\n# tau_tilde=1\nz\n1.0\n");
  CHECK_THROWS_AS(ldps::io::read_transcript_csv(short_file),
                  std::runtime_error);
}

TEST_CASE("format_double survives a text roundtrip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.0}) {
    CHECK(std::stod(ldps::io::format_double(x)) == x);
  }
}
