#include "ehmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ehmm {

std::vector<double> trim_burn_in(const std::vector<double>& x, double frac) {
  if (!(frac >= 0.0) || frac >= 1.0)
    throw std::invalid_argument("burn-in fraction must be in [0, 1)");
  const auto drop =
      static_cast<std::size_t>(std::floor(frac * static_cast<double>(x.size())));
  return {x.begin() + static_cast<std::ptrdiff_t>(drop), x.end()};
}

std::vector<std::vector<double>> parameter_series(
    const std::vector<ChainTrace>& traces, std::size_t param,
    bool natural_scale, double burn_in_frac) {
  std::vector<std::vector<double>> out;
  out.reserve(traces.size());
  for (const auto& tr : traces) {
    std::vector<double> s;
    s.reserve(tr.samples.size());
    for (const auto& p : tr.samples) {
      const double v = p.as_array()[param];
      s.push_back(natural_scale ? std::exp(v) : v);
    }
    out.push_back(trim_burn_in(s, burn_in_frac));
  }
  return out;
}

double pooled_autocovariance(const std::vector<std::vector<double>>& runs,
                             std::size_t lag) {
  if (runs.empty()) throw std::invalid_argument("no runs");
  const std::size_t n = runs[0].size();
  for (const auto& r : runs)
    if (r.size() != n) throw std::invalid_argument("unequal run lengths");
  if (lag >= n) throw std::invalid_argument("lag exceeds run length");

  double grand = 0.0;
  for (const auto& r : runs)
    for (double v : r) grand += v;
  grand /= static_cast<double>(runs.size() * n);

  double acc = 0.0;
  for (const auto& r : runs) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t)
      s += (r[t] - grand) * (r[t + lag] - grand);
    acc += s / static_cast<double>(n);
  }
  return acc / static_cast<double>(runs.size());
}

ActEstimate act(const std::vector<std::vector<double>>& runs,
                const ActOptions& opt) {
  if (runs.empty()) throw std::invalid_argument("no runs");
  const std::size_t n = runs[0].size();
  for (const auto& r : runs)
    if (r.size() != n) throw std::invalid_argument("unequal run lengths");
  if (n < 2) throw std::invalid_argument("runs too short");

  // Center around the grand mean once; lag sums then reuse the centered data.
  double grand = 0.0;
  for (const auto& r : runs)
    for (double v : r) grand += v;
  grand /= static_cast<double>(runs.size() * n);
  std::vector<std::vector<double>> c(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    c[i].resize(n);
    for (std::size_t t = 0; t < n; ++t) c[i][t] = runs[i][t] - grand;
  }
  auto gamma = [&](std::size_t lag) {
    double acc = 0.0;
    for (const auto& r : c) {
      double s = 0.0;
      for (std::size_t t = 0; t + lag < n; ++t) s += r[t] * r[t + lag];
      acc += s / static_cast<double>(n);
    }
    return acc / static_cast<double>(c.size());
  };

  ActEstimate est;
  const double gamma0 = gamma(0);
  if (!(gamma0 > 0.0)) {
    est.degenerate = true;
    return est;
  }
  const std::size_t cap =
      std::max<std::size_t>(1, std::min(n - 1, n / opt.cap_divisor));

  // Truncate just before the first run of `consecutive` near-zero lags.
  std::vector<double> rho;
  rho.reserve(64);
  std::size_t streak = 0;
  std::size_t trunc = cap;
  for (std::size_t k = 1; k <= cap; ++k) {
    const double r = gamma(k) / gamma0;
    rho.push_back(r);
    if (r < opt.rho_threshold) {
      if (++streak >= opt.consecutive) {
        trunc = k - opt.consecutive;
        break;
      }
    } else {
      streak = 0;
    }
  }
  double sum = 0.0;
  for (std::size_t k = 1; k <= trunc; ++k) sum += rho[k - 1];
  est.truncation_lag = trunc;
  est.tau = 1.0 + 2.0 * sum;
  est.below_one = est.tau < 1.0;
  return est;
}

PosteriorSummary posterior_summary(const std::vector<ChainTrace>& traces,
                                   double burn_in_frac) {
  if (traces.empty()) throw std::invalid_argument("no traces");
  PosteriorSummary out;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto runs = parameter_series(traces, p, true, burn_in_frac);
    std::vector<double> means;
    means.reserve(runs.size());
    for (const auto& r : runs) {
      if (r.empty()) throw std::invalid_argument("empty run after burn-in");
      double s = 0.0;
      for (double v : r) s += v;
      means.push_back(s / static_cast<double>(r.size()));
    }
    double mu = 0.0;
    for (double v : means) mu += v;
    mu /= static_cast<double>(means.size());
    double var = 0.0;
    for (double v : means) var += (v - mu) * (v - mu);
    const double nr = static_cast<double>(means.size());
    out.mean[p] = mu;
    out.se[p] = means.size() > 1 ? std::sqrt(var / (nr - 1.0) / nr) : 0.0;
  }
  return out;
}

EfficiencyRow efficiency_row(const std::vector<ChainTrace>& traces,
                             double burn_in_frac, const ActOptions& opt) {
  if (traces.empty()) throw std::invalid_argument("no traces");
  const TraceMeta& meta = traces[0].meta;
  EfficiencyRow row;
  row.sampler = sampler_name(meta.kind);
  row.pool_size = meta.pool_size;
  row.scaling = meta.scaling;
  row.updates_per_pool = meta.updates_per_pool;
  row.n1 = meta.n1;
  row.iterations = meta.iterations;
  row.chains = traces.size();

  double tsum = 0.0;
  std::uint64_t p1 = 0, a1 = 0, p2 = 0, a2 = 0;
  for (const auto& tr : traces) {
    tsum += tr.meta.time_per_iteration_s;
    const Counters& c = tr.meta.counters;
    if (meta.kind == SamplerKind::staged) {
      p1 += c.stage1_proposals;
      a1 += c.stage1_accepts;
      p2 += c.stage2_proposals;
      a2 += c.stage2_accepts;
    } else {
      p1 += c.param_proposals;
      a1 += c.param_accepts;
      p2 += c.site_proposals;
      a2 += c.site_accepts;
    }
  }
  row.time_per_iter = tsum / static_cast<double>(traces.size());
  row.acc1 = p1 ? static_cast<double>(a1) / static_cast<double>(p1) : 0.0;
  row.acc2 = p2 ? static_cast<double>(a2) / static_cast<double>(p2) : 0.0;

  for (std::size_t p = 0; p < 3; ++p) {
    const auto log_runs = parameter_series(traces, p, false, burn_in_frac);
    const auto est = act(log_runs, opt);
    row.act[p] = est.tau;
    row.lag[p] = est.truncation_lag;
    const auto nat_runs = parameter_series(traces, p, true, burn_in_frac);
    row.act_nat[p] = act(nat_runs, opt).tau;
  }
  row.summary = posterior_summary(traces, burn_in_frac);
  return row;
}

namespace {

void require_positive_time(const std::vector<EfficiencyRow>& rows) {
  for (const auto& r : rows)
    if (!(r.time_per_iter > 0.0))
      throw std::invalid_argument("time per iteration must be positive");
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string efficiency_csv(const std::vector<EfficiencyRow>& rows) {
  require_positive_time(rows);
  std::ostringstream os;
  os << "sampler,pool_size,scaling,updates_per_pool,n1,iterations,chains,"
        "time_per_iter,acc1,acc2,"
        "act_log_r,act_log_sigma,act_log_phi,"
        "act_time_log_r,act_time_log_sigma,act_time_log_phi,"
        "act_nat_r,act_nat_sigma,act_nat_phi,"
        "mean_r,se_r,mean_sigma,se_sigma,mean_phi,se_phi\n";
  for (const auto& r : rows) {
    const auto at = r.act_time();
    os << r.sampler << ',' << r.pool_size << ',' << fmt(r.scaling) << ','
       << r.updates_per_pool << ',' << r.n1 << ',' << r.iterations << ','
       << r.chains << ',' << fmt(r.time_per_iter) << ',' << fmt(r.acc1) << ','
       << fmt(r.acc2);
    for (double v : r.act) os << ',' << fmt(v);
    for (double v : at) os << ',' << fmt(v);
    for (double v : r.act_nat) os << ',' << fmt(v);
    for (std::size_t p = 0; p < 3; ++p)
      os << ',' << fmt(r.summary.mean[p]) << ',' << fmt(r.summary.se[p]);
    os << '\n';
  }
  return os.str();
}

std::string efficiency_text(const std::vector<EfficiencyRow>& rows) {
  require_positive_time(rows);
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-11s %5s %7s %8s %9s   %8s %8s %8s   %8s %8s %8s\n",
                "sampler", "L", "scale", "acc", "t/iter",
                "act(r)", "act(sig)", "act(phi)",
                "axt(r)", "axt(sig)", "axt(phi)");
  os << buf;
  for (const auto& r : rows) {
    const auto at = r.act_time();
    char acc[32];
    if (r.sampler == "staged")
      std::snprintf(acc, sizeof(acc), "%.0f,%.0f%%", 100 * r.acc1,
                    100 * r.acc2);
    else
      std::snprintf(acc, sizeof(acc), "%.0f%%", 100 * r.acc1);
    std::snprintf(buf, sizeof(buf),
                  "%-11s %5zu %7.3g %8s %9.3g   %8.3g %8.3g %8.3g   %8.3g "
                  "%8.3g %8.3g\n",
                  r.sampler.c_str(), r.pool_size, r.scaling, acc,
                  r.time_per_iter, r.act[0], r.act[1], r.act[2], at[0], at[1],
                  at[2]);
    os << buf;
  }
  return os.str();
}

}  // namespace ehmm
