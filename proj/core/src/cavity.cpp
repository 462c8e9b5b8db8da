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

#include <algorithm>
#include <cmath>
#include <string>

#include "uwbsense/errors.hpp"
#include "uwbsense/imaging.hpp"

namespace uwb {

namespace {

// Encode (A) and correlate (A^H) over a shared FFT size with cached code
// spectra. Codes are real, so A^H is plain correlation.
class CodeOperator {
 public:
  CodeOperator(const PortCodeBook& book, std::size_t channel_len)
      : nc_(channel_len),
        m_(channel_len + book.length - 1),
        nfft_(next_power_of_two(m_)),
        plan_(nfft_) {
    spectra_.reserve(book.pairs());
    for (const auto& h : book.responses) {
      std::vector<cplx> buf(nfft_, cplx{});
      for (std::size_t k = 0; k < h.size(); ++k) buf[k] = h[k];
      plan_.forward(buf);
      spectra_.push_back(std::move(buf));
    }
  }

  std::size_t mixture_length() const { return m_; }

  std::vector<cplx> apply(const std::vector<std::vector<cplx>>& x) const {
    std::vector<cplx> acc(nfft_, cplx{});
    std::vector<cplx> buf(nfft_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::fill(buf.begin(), buf.end(), cplx{});
      std::copy(x[i].begin(), x[i].end(), buf.begin());
      plan_.forward(buf);
      for (std::size_t k = 0; k < nfft_; ++k) acc[k] += buf[k] * spectra_[i][k];
    }
    plan_.inverse(acc);
    acc.resize(m_);
    return acc;
  }

  std::vector<std::vector<cplx>> adjoint(const std::vector<cplx>& y) const {
    std::vector<cplx> ys(nfft_, cplx{});
    std::copy(y.begin(), y.end(), ys.begin());
    plan_.forward(ys);
    std::vector<std::vector<cplx>> out(spectra_.size());
    std::vector<cplx> buf(nfft_);
    for (std::size_t i = 0; i < spectra_.size(); ++i) {
      for (std::size_t k = 0; k < nfft_; ++k) buf[k] = ys[k] * std::conj(spectra_[i][k]);
      plan_.inverse(buf);
      out[i].assign(buf.begin(), buf.begin() + static_cast<long>(nc_));
    }
    return out;
  }

 private:
  std::size_t nc_, m_, nfft_;
  FftPlan plan_;
  std::vector<std::vector<cplx>> spectra_;
};

double norm2(const std::vector<std::vector<cplx>>& x) {
  double s = 0.0;
  for (const auto& v : x) s += energy(v);
  return s;
}

}  // namespace

std::vector<ComplexSeries> cavity_decode(const ComplexSeries& mixture, const PortCodeBook& book,
                                         const DecodeOptions& opts) {
  if (book.pairs() == 0 || book.length == 0) throw InvalidArgument("empty codebook");
  for (const auto& h : book.responses)
    if (h.size() != book.length) throw InvalidArgument("codebook responses differ in length");
  if (mixture.size() < book.length)
    throw InvalidArgument("mixture length " + std::to_string(mixture.size()) +
                          " is shorter than code length " + std::to_string(book.length));
  if (std::abs(mixture.dt - book.dt) > 1e-9 * book.dt)
    throw InvalidArgument("mixture dt differs from codebook dt");

  const std::size_t nc = opts.channel_length ? opts.channel_length : mixture.size() - book.length + 1;
  if (nc + book.length - 1 > mixture.size())
    throw InvalidArgument("channel_length " + std::to_string(nc) + " exceeds mixture support");

  const CodeOperator op(book, nc);
  std::vector<cplx> y(mixture.samples.begin(), mixture.samples.begin() + static_cast<long>(op.mixture_length()));

  auto x = op.adjoint(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = 0.0;
    for (double v : book.responses[i]) e += v * v;
    if (!(e > 0.0)) throw NumericalError("code " + std::to_string(i) + " has zero energy");
    for (auto& v : x[i]) v /= e;
  }

  if (opts.refine_iterations > 0) {
    const auto ax = op.apply(x);
    std::vector<cplx> r(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) r[k] = y[k] - ax[k];
    auto s = op.adjoint(r);
    auto p = s;
    double gamma = norm2(s);
    const double tiny = 1e-30 * std::max(1.0, energy(y));
    for (std::size_t it = 0; it < opts.refine_iterations && gamma > tiny; ++it) {
      const auto q = op.apply(p);
      const double qq = energy(q);
      if (!(qq > 0.0)) break;
      const double alpha = gamma / qq;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < nc; ++k) x[i][k] += alpha * p[i][k];
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= alpha * q[k];
      s = op.adjoint(r);
      const double gamma_next = norm2(s);
      const double beta = gamma_next / gamma;
      gamma = gamma_next;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < nc; ++k) p[i][k] = s[i][k] + beta * p[i][k];
    }
  }

  std::vector<ComplexSeries> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = {std::move(x[i]), mixture.dt, mixture.t0};
  return out;
}

}  // namespace uwb
