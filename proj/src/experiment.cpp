#include "malpha/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "malpha/bounds.hpp"
#include "malpha/elementary.hpp"
#include "malpha/errors.hpp"
#include "malpha/term_kernel.hpp"

namespace malpha {
namespace {

struct SampleInput {
  SampleRecord record;
  AlphaSpec alpha;
  bool random = true;
};

std::vector<SampleInput> make_inputs(const ExperimentOptions& opts, std::uint32_t bits) {
  std::vector<SampleInput> out;
  out.reserve(opts.samples + opts.injected.size());
  for (std::uint64_t i = 0; i < opts.samples; ++i) {
    SampleRecord rec;
    rec.index = i;
    rec.seed = derive_seed(opts.master_seed, i);
    rec.label = "random";
    out.push_back(SampleInput{std::move(rec), sample_alpha(opts.master_seed, i, bits), true});
  }
  for (const AlphaSpec& alpha : opts.injected) {
    SampleRecord rec;
    rec.index = out.size();
    rec.label = alpha.describe();
    out.push_back(SampleInput{std::move(rec), alpha, false});
  }
  return out;
}

// Runs fn on every sample with up to thread_count() workers. Each sample
// writes only its own record; the lowest-index failure is rethrown.
template <class Fn>
void run_samples(std::vector<SampleInput>& inputs, Fn&& fn) {
  const std::size_t n = inputs.size();
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(inputs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

ExperimentResult collect(std::string name, const ExperimentOptions& opts, std::vector<std::string> stat_names,
                         std::vector<SampleInput>& inputs) {
  ExperimentResult r;
  r.experiment = std::move(name);
  r.master_seed = opts.master_seed;
  r.stat_names = std::move(stat_names);
  r.samples.reserve(inputs.size());
  for (auto& in : inputs) r.samples.push_back(std::move(in.record));
  return r;
}

// Values of one stat over the random samples only.
std::vector<double> random_column(const ExperimentResult& r, const std::vector<SampleInput>& inputs,
                                  std::size_t stat) {
  std::vector<double> out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].random) out.push_back(r.samples[i].stats[stat]);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double m = mean(v);
  double s = 0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double fraction_at_least(const std::vector<double>& v, double threshold) {
  if (v.empty()) return 0;
  std::size_t n = 0;
  for (const double x : v) n += x >= threshold ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(v.size());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void base_parameters(ExperimentResult& r, const ExperimentOptions& opts, std::uint32_t bits) {
  r.parameters["samples"] = opts.samples;
  r.parameters["injected"] = opts.injected.size();
  r.parameters["bits"] = bits;
  r.parameters["rel_tol"] = to_string(opts.sum.rel_tol);
}

}  // namespace

double ExperimentResult::summary_value(const std::string& name) const {
  for (const auto& [key, value] : summary) {
    if (key == name) return value;
  }
  throw InvalidInput("no summary value named " + name);
}

std::vector<double> ExperimentResult::stat_column(const std::string& name) const {
  const auto it = std::find(stat_names.begin(), stat_names.end(), name);
  if (it == stat_names.end()) throw InvalidInput("no sample statistic named " + name);
  const auto col = static_cast<std::size_t>(it - stat_names.begin());
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.stats[col]);
  return out;
}

nlohmann::ordered_json ExperimentResult::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "malpha-experiment v1";
  j["experiment"] = experiment;
  j["master_seed"] = master_seed;
  j["parameters"] = parameters;
  j["stat_names"] = stat_names;
  auto& arr = j["samples"] = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    nlohmann::ordered_json row;
    row["index"] = s.index;
    row["seed"] = s.seed;
    row["label"] = s.label;
    for (std::size_t i = 0; i < stat_names.size(); ++i) row[stat_names[i]] = s.stats[i];
    row["details"] = s.details;
    arr.push_back(std::move(row));
  }
  nlohmann::ordered_json sum = nlohmann::ordered_json::object();
  for (const auto& [key, value] : summary) sum[key] = value;
  j["summary"] = std::move(sum);
  j["notes"] = notes;
  return j;
}

std::string ExperimentResult::samples_csv() const {
  std::string out = "# malpha-csv v1 table=experiment-samples experiment=" + experiment +
                    " master_seed=" + std::to_string(master_seed) + "\n";
  out += "index,seed,label";
  for (const auto& n : stat_names) out += "," + n;
  out += "\n";
  for (const auto& s : samples) {
    out += std::to_string(s.index) + "," + std::to_string(s.seed) + "," + s.label;
    for (const double v : s.stats) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::uint32_t default_bits(std::size_t K) {
  const double need = std::ceil(static_cast<double>(K) * 2.4 / std::log(2.0)) + 1024;
  const auto words = static_cast<std::uint32_t>(std::ceil(need / 64));
  return std::max<std::uint32_t>(4096, words * 64);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

ExperimentResult levy_experiment(std::size_t K, const ExperimentOptions& opts) {
  if (K < 1) throw InvalidInput("levy_experiment: K must be >= 1");
  const std::uint32_t bits = opts.bits != 0 ? opts.bits : default_bits(K);
  auto inputs = make_inputs(opts, bits);
  run_samples(inputs, [K](SampleInput& in) {
    const RationalInterval levy = levy_exponent(in.alpha, K);
    const RationalInterval birk = birkhoff_log_quotient(in.alpha, K);
    in.record.stats = {levy.mid_approx(), birk.mid_approx()};
    in.record.details["levy_enclosure"] = {to_scientific(levy.lo(), 17, Rounding::down),
                                           to_scientific(levy.hi(), 17, Rounding::up)};
    in.record.details["birkhoff_enclosure"] = {to_scientific(birk.lo(), 17, Rounding::down),
                                               to_scientific(birk.hi(), 17, Rounding::up)};
  });
  ExperimentResult r = collect("levy", opts, {"levy_approx", "birkhoff_approx"}, inputs);
  base_parameters(r, opts, bits);
  r.parameters["K"] = K;
  const auto levy = random_column(r, inputs, 0);
  const auto birk = random_column(r, inputs, 1);
  const double levy_ref = levy_constant();
  const double khinchin_ref = khinchin_log_constant().value.mid_approx();
  r.summary = {
      {"levy_mean", mean(levy)},
      {"levy_sd", stddev(levy)},
      {"levy_reference", levy_ref},
      {"levy_rel_error", std::fabs(mean(levy) - levy_ref) / levy_ref},
      {"birkhoff_mean", mean(birk)},
      {"birkhoff_sd", stddev(birk)},
      {"khinchin_log_reference", khinchin_ref},
      {"birkhoff_rel_error", std::fabs(mean(birk) - khinchin_ref) / khinchin_ref},
  };
  r.notes.push_back("summary statistics cover the random samples only");
  return r;
}

ExperimentResult khinchin_io_experiment(const PhiSpec& phi, std::size_t K, const ExperimentOptions& opts) {
  if (K < 2) throw InvalidInput("khinchin_io_experiment: K must be >= 2");
  const std::uint32_t bits = opts.bits != 0 ? opts.bits : default_bits(K);
  const std::size_t window_lo = (K + 1) / 2;
  auto inputs = make_inputs(opts, bits);
  run_samples(inputs, [&](SampleInput& in) {
    const PartialQuotients pq = quotients(in.alpha, K);
    std::vector<std::uint64_t> hits;
    std::size_t in_window = 0;
    for (std::size_t k = 1; k <= K; ++k) {
      const Int& a = pq.a[k - 1];
      // cheap rejection before the exact comparison
      const double approx = phi.approx(static_cast<double>(k));
      const double ad = to_double(a);
      bool exceeds = false;
      if (ad * 2 < approx) {
        exceeds = false;
      } else if (ad > 2 * approx + 1) {
        exceeds = true;
      } else {
        exceeds = phi.exceeded_by(a, k);
      }
      if (!exceeds) continue;
      hits.push_back(k);
      if (k >= window_lo) ++in_window;
    }
    in.record.stats = {static_cast<double>(hits.size()), static_cast<double>(in_window),
                       in_window > 0 ? 1.0 : 0.0};
    in.record.details["exceedance_indices"] = hits;
  });
  ExperimentResult r =
      collect("khinchin", opts, {"exceedances", "window_exceedances", "window_hit"}, inputs);
  base_parameters(r, opts, bits);
  r.parameters["K"] = K;
  r.parameters["phi"] = phi.describe();
  r.parameters["window_lo"] = window_lo;
  r.parameters["window_hi"] = K;
  double expected = 0;
  for (std::size_t k = window_lo; k <= K; ++k) expected += gauss_kuzmin_exceedance(phi.approx(static_cast<double>(k)));
  const auto window = random_column(r, inputs, 1);
  r.summary = {
      {"window_fraction", fraction_at_least(window, 1)},
      {"mean_window_exceedances", mean(window)},
      {"expected_window_exceedances", expected},
      {"series_converges", phi.series_converges() ? 1.0 : 0.0},
  };
  r.notes.push_back("infinitely often is proxied by at least one exceedance in [window_lo, window_hi]");
  r.notes.push_back("expected_window_exceedances sums the Gauss-Kuzmin probabilities P(a_k > phi(k)) over the window");
  r.notes.push_back("summary statistics cover the random samples only");
  return r;
}

ExperimentResult growth_criterion_experiment(const PhiSpec& phi, std::uint64_t M_max, const ExperimentOptions& opts) {
  if (M_max < kGrowthGridStart) {
    throw InvalidInput("growth_criterion_experiment: M_max must be >= " + std::to_string(kGrowthGridStart));
  }
  const std::uint32_t bits = opts.bits != 0 ? opts.bits : 4096;
  std::vector<std::uint64_t> cuts;
  for (std::uint64_t d = kGrowthGridStart; d <= M_max; d *= 10) {
    cuts.push_back(d);
    if (d > M_max / 10) break;
  }
  if (cuts.back() != M_max) cuts.push_back(M_max);

  auto inputs = make_inputs(opts, bits);
  run_samples(inputs, [&](SampleInput& in) {
    std::vector<std::uint64_t> grid = denominator_grid(in.alpha, kGrowthGridStart, M_max);
    grid.insert(grid.end(), cuts.begin(), cuts.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SumOptions sopts = opts.sum;
    sopts.execution = Execution::sequential;
    PrefixSummer summer(in.alpha, sopts);
    double running = 0;
    double argmax = 0;
    std::vector<double> prefix_max;
    std::size_t cut = 0;
    nlohmann::json series = nlohmann::json::array();
    for (const std::uint64_t M : grid) {
      const RationalInterval s = summer.advance_to(M);
      const Rational mr(from_u64(M));
      const RationalInterval lnm = ln_enclosure(from_u64(M), 48);
      const RationalInterval den = lnm * mr * phi.enclose(lnm);
      const double R = (s / den).mid_approx();
      if (R > running) {
        running = R;
        argmax = static_cast<double>(M);
      }
      series.push_back({M, R});
      while (cut < cuts.size() && cuts[cut] == M) {
        prefix_max.push_back(running);
        ++cut;
      }
    }
    std::size_t increases = 0;
    for (std::size_t i = 1; i < prefix_max.size(); ++i) increases += prefix_max[i] > prefix_max[i - 1] ? 1 : 0;
    in.record.stats = {running, argmax, static_cast<double>(increases)};
    in.record.details["prefix_max_R"] = prefix_max;
    in.record.details["R"] = std::move(series);
  });
  ExperimentResult r = collect("growth", opts, {"max_R_approx", "argmax_M", "prefix_increases"}, inputs);
  base_parameters(r, opts, bits);
  r.parameters["M_max"] = M_max;
  r.parameters["phi"] = phi.describe();
  r.parameters["grid_start"] = kGrowthGridStart;
  r.parameters["prefix_cuts"] = cuts;
  const auto max_r = random_column(r, inputs, 0);
  const auto inc = random_column(r, inputs, 2);
  r.summary = {
      {"median_max_R", median(max_r)},
      {"q10_max_R", quantile(max_r, 0.1)},
      {"q25_max_R", quantile(max_r, 0.25)},
      {"q75_max_R", quantile(max_r, 0.75)},
      {"q90_max_R", quantile(max_r, 0.9)},
      {"fraction_increasing", fraction_at_least(inc, 1)},
      {"fraction_increasing_twice", fraction_at_least(inc, 2)},
      {"series_converges", phi.series_converges() ? 1.0 : 0.0},
  };
  r.notes.push_back("R(M) = S_M / (M ln M phi(ln M)); phi is applied to ln M directly");
  r.notes.push_back("grid: decades from grid_start and every convergent denominator in [grid_start, M_max]");
  r.notes.push_back("limsup is proxied by the running maximum; prefix_max_R is read at each prefix cut");
  r.notes.push_back("summary statistics cover the random samples only");
  return r;
}

ExperimentResult eventual_event_experiment(std::size_t K, std::size_t k_min, const ExperimentOptions& opts) {
  if (k_min < 1 || K <= k_min) throw InvalidInput("eventual_event_experiment: need 1 <= k_min < K");
  const std::uint32_t bits = opts.bits != 0 ? opts.bits : default_bits(K);
  auto inputs = make_inputs(opts, bits);
  run_samples(inputs, [&](SampleInput& in) {
    ConvergentTable table(in.alpha);
    table.require(K);
    std::size_t violations = 0;
    std::size_t last = 0;
    for (std::size_t k = k_min; k < K; ++k) {
      if (table.quotient(k + 1) > table[k].q) {
        ++violations;
        last = k;
      }
    }
    in.record.stats = {violations == 0 ? 1.0 : 0.0, static_cast<double>(violations), static_cast<double>(last)};
  });
  ExperimentResult r = collect("eventual", opts, {"holds", "violations", "last_violation_k"}, inputs);
  base_parameters(r, opts, bits);
  r.parameters["K"] = K;
  r.parameters["k_min"] = k_min;
  const auto holds = random_column(r, inputs, 0);
  r.summary = {{"fraction_holding", fraction_at_least(holds, 1)}};
  r.notes.push_back("event: a_{k+1} <= q_k for every k in [k_min, K-1]");
  r.notes.push_back("summary statistics cover the random samples only");
  return r;
}

}  // namespace malpha
