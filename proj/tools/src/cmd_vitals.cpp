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

#include <filesystem>

#include "commands.hpp"
#include "uwbsense/container.hpp"
#include "uwbsense/vitals.hpp"

namespace uwb::cli {

using nlohmann::json;

namespace {

int vitals_estimate(const Invocation& inv, ConfigNode& cfg) {
  const ClutterMode mode = parse_clutter_mode(cfg.get<std::string>("clutter", "circle"));
  const double resp_max = cfg.get<double>("resp_band_max", 0.5);
  IbiOptions opts;
  opts.lowpass_hz = cfg.get<double>("lowpass_hz", opts.lowpass_hz);
  opts.refine_passes = cfg.get<std::size_t>("refine_passes", opts.refine_passes);
  cfg.finish();

  const std::filesystem::path in_path = inv.require_in();
  const Container in = read_container(in_path);
  if (in.kind != "iq_trace") throw InvalidArgument("vitals estimate needs an iq_trace container, got " + in.kind);
  const IQTrace iq = iq_trace_from(in);

  const ClutterRemoval cr = remove_static_clutter(iq, mode);
  const RealSeries d = demodulate_phase(cr.trace);
  const RealSeries dh = suppress_respiration(d, resp_max);
  IbiDiagnostics diag;
  const IBISeries ibi = estimate_ibi(dh, opts, &diag);

  const std::filesystem::path out = inv.require_out();
  write_ibi_csv(out, ibi);

  json summary;
  summary["beats"] = ibi.beat_times.size();
  summary["mean_hr"] = ibi.intervals.empty() ? 0.0 : 60.0 / mean(ibi.intervals);
  summary["coarse_period"] = diag.coarse_period;
  summary["anchor"] = std::string(feature_kind_name(diag.anchor));
  summary["clutter"] = std::string(clutter_mode_name(mode));
  summary["clutter_centre"] = json::array({cr.centre.real(), cr.centre.imag()});
  if (mode == ClutterMode::CircleFit) summary["circle_residual"] = cr.residual;

  const auto truth_path = sibling(in_path, ".truth.json");
  if (std::filesystem::exists(truth_path)) {
    json truth;
    try {
      truth = json::parse(read_text(truth_path));
    } catch (const json::parse_error& e) {
      throw InvalidArgument("truth sidecar '" + truth_path.string() + "' is not valid JSON: " + e.what());
    }
    const auto beats = truth.at("beat_times").get<std::vector<double>>();
    const IbiComparison cmp = compare_ibi(ibi, beats);
    summary["rmse_ms"] = 1e3 * cmp.rmse;
    summary["rmse_percent"] = cmp.rmse_percent;
    summary["matched_intervals"] = cmp.matched_intervals;
    summary["truth_intervals"] = cmp.truth_intervals;
  }
  write_json(sibling(out, ".summary.json"), summary);
  std::string line = std::to_string(ibi.beat_times.size()) + " beats";
  if (summary.contains("rmse_ms")) line += ", rmse " + std::to_string(summary["rmse_ms"].get<double>()) + " ms";
  inv.say(line);
  return 0;
}

int vitals_hrv(const Invocation& inv, ConfigNode& cfg) {
  cfg.finish();
  const IBISeries ibi = read_ibi_csv(inv.require_in());
  const HRVReport rep = hrv_lf_hf(ibi);
  json doc;
  doc["lf_power"] = rep.lf_power;
  doc["hf_power"] = rep.hf_power;
  doc["ratio"] = rep.ratio_defined ? json(rep.ratio) : json(nullptr);
  doc["ratio_defined"] = rep.ratio_defined;
  doc["record_span"] = rep.record_span;
  write_json(inv.require_out(), doc);
  inv.say(rep.ratio_defined ? "LF/HF " + std::to_string(rep.ratio) : std::string("LF/HF undefined"));
  return 0;
}

}  // namespace

int cmd_vitals(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  if (inv.stage == "estimate") return vitals_estimate(inv, cfg);
  return vitals_hrv(inv, cfg);
}

}  // namespace uwb::cli
