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

#include "commands.hpp"
#include "uwbsense/container.hpp"
#include "uwbsense/imaging.hpp"

namespace uwb::cli {

namespace {

std::vector<ComplexSeries> rows_of(const ChannelMatrix& m) {
  std::vector<ComplexSeries> out(m.channels());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Eigen::RowVectorXcd r = m.snapshots.row(static_cast<Eigen::Index>(i));
    out[i].samples.assign(r.data(), r.data() + r.size());
    out[i].dt = 1.0 / m.fs;
  }
  return out;
}

ChannelMatrix matrix_of(const std::vector<ComplexSeries>& rows, double fs) {
  ChannelMatrix m;
  m.fs = fs;
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  m.snapshots.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < n; ++k)
      m.snapshots(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i].samples[k];
  return m;
}

}  // namespace

int cmd_cavity(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  const std::string& stage = inv.stage;

  if (stage == "codebook") {
    const auto n_pairs = cfg.get<std::size_t>("n_pairs", 16);
    const auto length = cfg.get<std::size_t>("length", 4096);
    const double dt = cfg.get<double>("dt", 1.25e-10);
    const std::uint64_t seed = inv.resolve_seed(cfg);
    cfg.finish();
    const PortCodeBook book = gen_port_codebook(n_pairs, length, dt, seed);
    write_codebook(inv.require_out(), book, seed);
    inv.say("codebook " + std::to_string(n_pairs) + " x " + std::to_string(length) + ", max correlation " +
            std::to_string(max_pairwise_correlation(book)));
    return 0;
  }

  const std::string book_path = cfg.require<std::string>("codebook");
  DecodeOptions opts;
  if (stage == "decode") {
    opts.channel_length = cfg.get<std::size_t>("channel_length", 0);
    opts.refine_iterations = cfg.get<std::size_t>("refine_iterations", 0);
  }
  cfg.finish();
  const PortCodeBook book = read_codebook(book_path);
  const Container in = read_container(inv.require_in());
  if (in.kind != "iq_trace") throw InvalidArgument("cavity " + stage + " needs an iq_trace container, got " + in.kind);
  const ChannelMatrix m = channel_matrix_from(in);

  ChannelMatrix result;
  if (stage == "encode") {
    const auto rows = rows_of(m);
    result = matrix_of({cavity_encode(rows, book)}, m.fs);
  } else {
    if (m.channels() != 1) throw InvalidArgument("cavity decode expects a single-channel mixture");
    result = matrix_of(cavity_decode(rows_of(m).front(), book, opts), m.fs);
  }
  Container c = to_container(result, 0.0);
  c.attrs["role"] = stage == "encode" ? "cavity_mixture" : "cavity_channels";
  c.seed = in.seed;
  c.provenance = inv.provenance();
  write_container(inv.require_out(), std::move(c));
  inv.say("cavity " + stage + ": " + std::to_string(result.channels()) + " x " + std::to_string(result.samples()));
  return 0;
}

}  // namespace uwb::cli
