// Copyright 2026 The eqboost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqboost/adversary.hpp"

#include <algorithm>
#include <cmath>

namespace eqboost {

AdversaryKind parse_adversary_kind(std::string_view name) {
  if (name == "strong") return AdversaryKind::Strong;
  if (name == "fixed-error") return AdversaryKind::FixedError;
  if (name == "nearest-error") return AdversaryKind::NearestError;
  if (name == "biased-error") return AdversaryKind::BiasedError;
  if (name == "lazy") return AdversaryKind::Lazy;
  throw UsageError("unknown adversary kind: " + std::string(name));
}

std::string_view adversary_kind_name(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::Strong: return "strong";
    case AdversaryKind::FixedError: return "fixed-error";
    case AdversaryKind::NearestError: return "nearest-error";
    case AdversaryKind::BiasedError: return "biased-error";
    case AdversaryKind::Lazy: return "lazy";
  }
  return "unknown";
}

namespace {

// Shared plumbing: the error set of the attacked classifier, cached for the
// most recently seen function (batches query the same classifier m times).
class AdversaryBase : public Adversary {
 public:
  explicit AdversaryBase(const GameContext& ctx) : ctx_(ctx) {
    if (!ctx.dist || !ctx.g) throw OutOfRangeError("adversary: missing game context");
    g_table_ = ctx.g->evaluate(ctx.dist->size());
  }

 protected:
  struct ErrorView {
    std::uint64_t fingerprint = 0;
    std::vector<Index> points;  // sorted indices with f(x) != g(x)
    double mass = 0.0;          // D of the error set
    std::vector<double> cdf;    // kind-specific sampling cdf over points
    bool cdf_ready = false;
  };

  const ErrorView& view(const Hypothesis& f) {
    const ArrayXi ft = f.evaluate(g_table_.size());
    const std::uint64_t fp = table_fingerprint(ft);
    if (cache_ && cache_->fingerprint == fp) return *cache_;
    ErrorView v;
    v.fingerprint = fp;
    for (Index i = 0; i < ft.size(); ++i) {
      if (ft[i] != g_table_[i]) {
        v.points.push_back(i);
        v.mass += ctx_.dist->weight(i);
      }
    }
    cache_ = std::move(v);
    return *cache_;
  }

  // view(f), requiring positive risk.
  const ErrorView& attackable_view(const Hypothesis& f) {
    const ErrorView& v = view(f);
    if (v.mass <= 0.0)
      throw NoErrorExistsError("adversary: classifier has zero risk");
    return v;
  }

  Index draw_from_cdf(const std::vector<double>& cdf,
                      const std::vector<Index>& points, RandomStream& rng) const {
    const double u = rng.next_double() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t pos = std::min<std::size_t>(it - cdf.begin(), points.size() - 1);
    return points[pos];
  }

  GameContext ctx_;
  ArrayXi g_table_;
  std::optional<ErrorView> cache_;
};

class StrongAdversary final : public AdversaryBase {
 public:
  using AdversaryBase::AdversaryBase;
  std::string_view name() const override { return "strong"; }

  Index respond(const Hypothesis& f, Index /*x*/, RandomStream& rng) override {
    const ErrorView& v = attackable_view(f);
    ensure_cdf();
    return draw_from_cdf(cache_->cdf, v.points, rng);
  }

  ArrayXd reply_distribution(const Hypothesis& f) override {
    const ErrorView& v = attackable_view(f);
    ArrayXd q = ArrayXd::Zero(g_table_.size());
    for (const Index x : v.points) q[x] = ctx_.dist->weight(x) / v.mass;
    return q;
  }

 private:
  void ensure_cdf() {
    if (cache_->cdf_ready) return;
    cache_->cdf.clear();
    double acc = 0.0;
    for (const Index x : cache_->points) {
      acc += ctx_.dist->weight(x);
      cache_->cdf.push_back(acc);
    }
    cache_->cdf_ready = true;
  }
};

class FixedErrorAdversary final : public AdversaryBase {
 public:
  using AdversaryBase::AdversaryBase;
  std::string_view name() const override { return "fixed-error"; }

  Index respond(const Hypothesis& f, Index /*x*/, RandomStream& /*rng*/) override {
    return attackable_view(f).points.front();
  }

  ArrayXd reply_distribution(const Hypothesis& f) override {
    const ErrorView& v = attackable_view(f);
    ArrayXd q = ArrayXd::Zero(g_table_.size());
    q[v.points.front()] = 1.0;
    return q;
  }
};

class NearestErrorAdversary final : public AdversaryBase {
 public:
  using AdversaryBase::AdversaryBase;
  std::string_view name() const override { return "nearest-error"; }

  Index respond(const Hypothesis& f, Index x, RandomStream& /*rng*/) override {
    return nearest(attackable_view(f).points, x);
  }

  ArrayXd reply_distribution(const Hypothesis& f) override {
    const ErrorView& v = attackable_view(f);
    ArrayXd q = ArrayXd::Zero(g_table_.size());
    for (Index x = 0; x < g_table_.size(); ++x)
      q[nearest(v.points, x)] += ctx_.dist->weight(x);
    return q;
  }

 private:
  static Index nearest(const std::vector<Index>& pts, Index x) {
    const auto it = std::lower_bound(pts.begin(), pts.end(), x);
    if (it == pts.begin()) return *it;
    if (it == pts.end()) return pts.back();
    const Index right = *it, left = *(it - 1);
    return (x - left) <= (right - x) ? left : right;  // ties go left
  }
};

class BiasedErrorAdversary final : public AdversaryBase {
 public:
  BiasedErrorAdversary(const GameContext& ctx, double beta)
      : AdversaryBase(ctx), beta_(beta) {}
  std::string_view name() const override { return "biased-error"; }

  Index respond(const Hypothesis& f, Index /*x*/, RandomStream& rng) override {
    const ErrorView& v = attackable_view(f);
    ensure_cdf();
    return draw_from_cdf(cache_->cdf, v.points, rng);
  }

  ArrayXd reply_distribution(const Hypothesis& f) override {
    const ErrorView& v = attackable_view(f);
    ArrayXd q = ArrayXd::Zero(g_table_.size());
    double total = 0.0;
    for (std::size_t r = 0; r < v.points.size(); ++r) {
      const double w = weight(v.points[r], r);
      q[v.points[r]] = w;
      total += w;
    }
    return q / total;
  }

 private:
  double weight(Index x, std::size_t rank0) const {
    return ctx_.dist->weight(x) * std::pow(static_cast<double>(rank0 + 1), -beta_);
  }
  void ensure_cdf() {
    if (cache_->cdf_ready) return;
    cache_->cdf.clear();
    double acc = 0.0;
    for (std::size_t r = 0; r < cache_->points.size(); ++r) {
      acc += weight(cache_->points[r], r);
      cache_->cdf.push_back(acc);
    }
    cache_->cdf_ready = true;
  }
  double beta_;
};

class LazyAdversary final : public AdversaryBase {
 public:
  using AdversaryBase::AdversaryBase;
  std::string_view name() const override { return "lazy"; }

  Index respond(const Hypothesis& f, Index x, RandomStream& /*rng*/) override {
    attackable_view(f);
    return x;  // hands back the raw example draw
  }

  ArrayXd reply_distribution(const Hypothesis& f) override {
    attackable_view(f);
    return ctx_.dist->weights();
  }
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const GameContext& ctx,
                                          double bias_exponent) {
  switch (kind) {
    case AdversaryKind::Strong: return std::make_unique<StrongAdversary>(ctx);
    case AdversaryKind::FixedError: return std::make_unique<FixedErrorAdversary>(ctx);
    case AdversaryKind::NearestError: return std::make_unique<NearestErrorAdversary>(ctx);
    case AdversaryKind::BiasedError:
      return std::make_unique<BiasedErrorAdversary>(ctx, bias_exponent);
    case AdversaryKind::Lazy: return std::make_unique<LazyAdversary>(ctx);
  }
  throw InternalError("make_adversary: unknown kind");
}

StrengthTestResult strength_test(Adversary& adv, const Hypothesis& f,
                                 const Hypothesis& g, const DiscreteDistribution& dist) {
  const Mask wrong = disagreement(f, g, dist.size());
  if (dist.mass(wrong) <= 0.0)
    throw ZeroRiskFunctionError("strength_test: classifier has zero risk");
  const ArrayXd ideal = adv.reply_distribution(f);
  const ArrayXd truth = restrict(dist, wrong).weights();
  const double tv = total_variation(ideal, truth);
  return StrengthTestResult{tv, tv == 0.0};
}

StrengthTestResult strength_test_empirical(Adversary& adv, const Hypothesis& f,
                                           const Hypothesis& g,
                                           const DiscreteDistribution& dist,
                                           long long n_samples, double tau,
                                           RandomStream& rng) {
  if (n_samples < 1) throw OutOfRangeError("strength_test_empirical: n_samples >= 1");
  const Mask wrong = disagreement(f, g, dist.size());
  if (dist.mass(wrong) <= 0.0)
    throw ZeroRiskFunctionError("strength_test_empirical: classifier has zero risk");
  ArrayXd counts = ArrayXd::Zero(dist.size());
  for (long long i = 0; i < n_samples; ++i) {
    const Index x = sample(dist, rng);
    counts[adv.respond(f, x, rng)] += 1.0;
  }
  const ArrayXd truth = restrict(dist, wrong).weights();
  const double tv = total_variation(counts / static_cast<double>(n_samples), truth);
  return StrengthTestResult{tv, tv <= tau};
}

StrengthTestResult strength_test_empirical(Adversary& adv, const Hypothesis& f,
                                           const Hypothesis& g,
                                           const DiscreteDistribution& dist,
                                           RandomStream& rng) {
  return strength_test_empirical(adv, f, g, dist, kDefaultStrengthSamples,
                                 kDefaultStrengthTau, rng);
}

}  // namespace eqboost
