// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The uwbsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "uwbsense/array.hpp"
#include "uwbsense/container.hpp"

namespace uwb::cli {

using nlohmann::json;

namespace {

json weights_json(const Eigen::VectorXcd& w) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < w.size(); ++i) arr.push_back({w(i).real(), w(i).imag()});
  return arr;
}

double array_wavelength(const Container& c) {
  if (!c.attrs.contains("wavelength")) throw InvalidArgument("iq_trace container lacks the array wavelength");
  return c.attrs["wavelength"].get<double>();
}

}  // namespace

int cmd_beamform(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  const std::string& stage = inv.stage;
  double loading = 1e-3;
  AngleGrid grid;
  double constraint = 0.0;
  if (stage != "mrc") loading = cfg.get<double>("loading_rel", loading);
  if (stage == "capon") {
    grid.start_deg = cfg.get<double>("start_deg", grid.start_deg);
    grid.step_deg = cfg.get<double>("step_deg", grid.step_deg);
    grid.count = cfg.get<std::size_t>("count", grid.count);
  } else if (stage == "dcmp") {
    constraint = cfg.get<double>("constraint_deg", constraint);
  }
  cfg.finish();

  const Container in = read_container(inv.require_in());
  if (in.kind != "iq_trace") throw InvalidArgument("beamform needs an iq_trace container, got " + in.kind);
  const ChannelMatrix m = channel_matrix_from(in);
  const std::filesystem::path out = inv.require_out();

  if (stage == "mrc") {
    const MrcResult r = mrc_combine(m);
    ChannelMatrix one;
    one.fs = m.fs;
    one.snapshots = Eigen::Map<const Eigen::RowVectorXcd>(r.output.samples.data(),
                                                          static_cast<Eigen::Index>(r.output.size()));
    Container c = to_container(one, 0.0);
    c.attrs["role"] = "mrc_output";
    c.seed = in.seed;
    c.provenance = inv.provenance();
    write_container(out, std::move(c));
    json w;
    w["weights"] = weights_json(r.weights);
    w["eigenvalue"] = r.eigenvalue;
    w["iterations"] = r.iterations;
    write_json(sibling(out, ".weights.json"), w);
    inv.say("MRC converged in " + std::to_string(r.iterations) + " iterations");
    return 0;
  }

  if (m.positions.size() != m.channels())
    throw InvalidArgument("iq_trace container lacks element positions for beamforming");
  const double wavelength = array_wavelength(in);
  const CovarianceEstimate cov = estimate_covariance(m, loading);

  if (stage == "capon") {
    const RealSeries p = capon_spectrum(cov, m.positions, wavelength, grid);
    double peak = 0.0;
    for (double v : p.samples) peak = std::max(peak, v);
    std::string csv = "angle_deg,power,power_db\n";
    char buf[128];
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.6f\n", p.time(i), p.samples[i],
                    10.0 * std::log10(p.samples[i] / peak));
      csv += buf;
    }
    write_text(out, csv);
    inv.say("capon spectrum over " + std::to_string(p.size()) + " angles");
    return 0;
  }

  const Eigen::VectorXcd w = dcmp_weights(cov, constraint, m.positions, wavelength);
  const cplx resp = beam_response(w, m.positions, wavelength, constraint);
  json doc;
  doc["constraint_deg"] = constraint;
  doc["weights"] = weights_json(w);
  doc["constraint_response"] = {resp.real(), resp.imag()};
  write_json(out, doc);
  inv.say("dcmp weights for " + std::to_string(w.size()) + " elements");
  return 0;
}

}  // namespace uwb::cli
