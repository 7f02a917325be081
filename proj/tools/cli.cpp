#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "malpha/bounds.hpp"
#include "malpha/errors.hpp"
#include "malpha/experiment.hpp"
#include "malpha/metric.hpp"
#include "malpha/sums.hpp"

namespace malpha::cli {
namespace {

constexpr std::uint64_t kDefaultGridMax = 100000;

struct AlphaFlags {
  std::string rational;
  std::string surd;
  std::string rule;
  std::string random;
  std::string cap;
  std::string a1 = "1";
};

struct CommonFlags {
  std::string format = "csv";
  std::string out;
  std::string rel_tol;
  double budget = 0;  // seconds, 0 = none
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

Int parse_int(const std::string& s, const std::string& what) {
  try {
    return make_int(s);
  } catch (const Error&) {
    throw InvalidInput(what + ": expected an integer, got '" + s + "'");
  }
}

// Non-negative integer; accepts "100000", "1e5" and "10^5".
std::uint64_t parse_count(const std::string& s, const std::string& what) {
  const auto pos = s.find_first_of("e^");
  Int v;
  if (pos == std::string::npos) {
    v = parse_int(s, what);
  } else {
    const Int base = s[pos] == 'e' ? parse_int(s.substr(0, pos), what) : Int(1);
    const Int radix = s[pos] == 'e' ? Int(10) : parse_int(s.substr(0, pos), what);
    const Int exp = parse_int(s.substr(pos + 1), what);
    if (exp < 0 || exp > 64) throw InvalidInput(what + ": exponent out of range in '" + s + "'");
    v = base * pow(radix, exp.get_ui());
  }
  if (v < 0 || !fits_u64(v)) throw InvalidInput(what + ": out of range: '" + s + "'");
  return to_u64(v);
}

AlphaSpec parse_alpha(const AlphaFlags& f) {
  const int given = !f.rational.empty() + !f.surd.empty() + !f.rule.empty() + !f.random.empty();
  if (given != 1) throw InvalidInput("exactly one of --rational, --surd, --rule, --random is required");
  if (!f.rational.empty()) {
    const Rational r = parse_rational(f.rational);
    return AlphaSpec::rational(r.get_num(), r.get_den());
  }
  if (!f.surd.empty()) {
    const auto parts = split(f.surd, ',');
    if (parts.size() != 3) throw InvalidInput("--surd expects D,P,Q");
    return AlphaSpec::surd(parse_int(parts[1], "--surd P"), parse_int(parts[0], "--surd D"),
                           parse_int(parts[2], "--surd Q"));
  }
  if (!f.random.empty()) {
    const auto parts = split(f.random, ',');
    if (parts.size() != 2) throw InvalidInput("--random expects seed,bits");
    const std::uint64_t seed = parse_count(parts[0], "--random seed");
    const std::uint64_t bits = parse_count(parts[1], "--random bits");
    if (bits < 64 || bits > (1u << 24)) throw InvalidInput("--random bits must be in [64, 2^24]");
    return AlphaSpec::random_dyadic(seed, static_cast<std::uint32_t>(bits));
  }
  std::optional<Int> cap;
  if (!f.cap.empty()) cap = parse_int(f.cap, "--cap");
  if (f.rule == "pow2") return AlphaSpec::powers_of_two();
  if (f.rule.rfind("const:", 0) == 0) {
    const Int c = parse_int(f.rule.substr(6), "--rule const");
    if (c < 1) throw InvalidInput("--rule const:c needs c >= 1");
    return AlphaSpec::constant_quotients(c);
  }
  GrowthRule rule;
  if (f.rule == "square") {
    rule = GrowthRule::square(cap);
  } else if (f.rule == "exp") {
    rule = GrowthRule::ceil_exp(cap);
  } else {
    throw InvalidInput("unknown rule '" + f.rule + "' (pow2, const:c, square, exp)");
  }
  rule.seed = parse_int(f.a1, "--a1");
  return build_pathological(rule, 1);
}

void add_alpha_flags(CLI::App* app, AlphaFlags& f) {
  app->add_option("--rational", f.rational, "alpha = p/q");
  app->add_option("--surd", f.surd, "alpha = (P + sqrt(D))/Q, given as D,P,Q");
  app->add_option("--rule", f.rule, "rule-generated alpha: pow2, const:c, square, exp");
  app->add_option("--random", f.random, "random dyadic alpha: seed,bits");
  app->add_option("--cap", f.cap, "largest quotient a growth rule may produce");
  app->add_option("--a1", f.a1, "first quotient of a growth rule");
}

void add_common_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", f.out, "output file (default stdout)");
  app->add_option("--rel-tol", f.rel_tol, "per-term relative tolerance, e.g. 2^-20");
  app->add_option("--budget", f.budget, "runtime budget in seconds");
}

SumOptions sum_options(const CommonFlags& f) {
  SumOptions o;
  if (!f.rel_tol.empty()) {
    o.rel_tol = parse_rational(f.rel_tol);
    if (sgn(o.rel_tol) <= 0 || o.rel_tol >= 1) throw InvalidInput("--rel-tol must lie in (0, 1)");
  }
  if (f.budget < 0) throw InvalidInput("--budget must be non-negative");
  if (f.budget > 0) {
    o.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(f.budget));
  }
  o.execution = Execution::parallel;
  return o;
}

// Grid from --M and --grid: a single M, an explicit list, or "q" for every
// convergent denominator up to --M (default 10^5).
std::vector<std::uint64_t> resolve_grid(const AlphaSpec& alpha, const std::string& M, const std::string& grid) {
  if (grid.empty()) {
    if (M.empty()) throw InvalidInput("one of --M or --grid is required");
    const std::uint64_t m = parse_count(M, "--M");
    if (m < 1) throw InvalidInput("--M must be >= 1");
    return {m};
  }
  if (grid == "q") {
    const std::uint64_t max = M.empty() ? kDefaultGridMax : parse_count(M, "--M");
    return denominator_grid(alpha, 1, max);
  }
  if (!M.empty()) throw InvalidInput("--M cannot be combined with an explicit --grid list");
  std::vector<std::uint64_t> out;
  for (const auto& part : split(grid, ',')) {
    const std::uint64_t m = parse_count(part, "--grid");
    if (m < 1) throw InvalidInput("--grid values must be >= 1");
    if (!out.empty() && m <= out.back()) throw InvalidInput("--grid must be strictly increasing");
    out.push_back(m);
  }
  return out;
}

// Output target: --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw InvalidInput("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& os() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string lo_str(const Rational& x) { return to_scientific(x, 17, Rounding::down); }
std::string hi_str(const Rational& x) { return to_scientific(x, 17, Rounding::up); }
std::string mid_str(const RationalInterval& x) { return to_scientific(x.midpoint(), 17, Rounding::nearest); }

std::string header(const std::string& table, const AlphaSpec& alpha) {
  return "# malpha-csv v1 table=" + table + " alpha=" + alpha.describe() + "\n";
}

// ---- expand ----

struct ExpandFlags {
  AlphaFlags alpha;
  CommonFlags common;
  std::string depth;
};

void cmd_expand(const ExpandFlags& f, std::ostream& fallback) {
  const AlphaSpec alpha = parse_alpha(f.alpha);
  ConvergentTable table(alpha);
  std::size_t depth = 20;
  if (!f.depth.empty()) {
    depth = parse_count(f.depth, "--depth");
    table.require(depth);
  } else if (alpha.is_rational()) {
    depth = 0;
    while (table.extend_to(depth + 1)) ++depth;
  } else {
    table.require(depth);
  }
  Sink sink(f.common.out, fallback);
  std::ostream& os = sink.os();
  if (f.common.format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = "malpha-expand v1";
    j["alpha"] = alpha.describe();
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k <= depth; ++k) {
      nlohmann::ordered_json row;
      row["k"] = k;
      row["a_k"] = k == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(table.quotient(k).get_str());
      row["p_k"] = table[k].p.get_str();
      row["q_k"] = table[k].q.get_str();
      rows.push_back(std::move(row));
    }
    os << j.dump(2) << "\n";
    return;
  }
  os << header("expand", alpha) << "k,a_k,p_k,q_k\n";
  for (std::size_t k = 0; k <= depth; ++k) {
    os << k << "," << (k == 0 ? std::string() : table.quotient(k).get_str()) << "," << table[k].p.get_str() << ","
       << table[k].q.get_str() << "\n";
  }
}

// ---- sum ----

struct GridFlags {
  AlphaFlags alpha;
  CommonFlags common;
  std::string M;
  std::string grid;
};

void cmd_sum(const GridFlags& f, std::ostream& fallback) {
  const AlphaSpec alpha = parse_alpha(f.alpha);
  const SumOptions opts = sum_options(f.common);
  const auto grid = resolve_grid(alpha, f.M, f.grid);
  if (!grid.empty()) require_defined(alpha, grid.back());
  Sink sink(f.common.out, fallback);
  std::ostream& os = sink.os();
  const bool json = f.common.format == "json";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (!json) os << header("sum", alpha) << "M,S_lo_approx,S_hi_approx,k,p_k,q_k,specials\n";

  PrefixSummer summer(alpha, opts);
  ConvergentTable table(alpha);
  for (const std::uint64_t M : grid) {
    const RationalInterval s = summer.advance_to(M);
    const std::size_t k = table.locate(from_u64(M));
    const Int& p = table[k].p;
    const Int& q = table[k].q;
    const std::uint64_t specials = count_special(M, to_u64(mod(p, q)), to_u64(q));
    if (json) {
      nlohmann::ordered_json row;
      row["M"] = M;
      row["S_lo_approx"] = lo_str(s.lo());
      row["S_hi_approx"] = hi_str(s.hi());
      row["k"] = k;
      row["p_k"] = p.get_str();
      row["q_k"] = q.get_str();
      row["specials"] = specials;
      rows.push_back(std::move(row));
    } else {
      os << M << "," << lo_str(s.lo()) << "," << hi_str(s.hi()) << "," << k << "," << p.get_str() << ","
         << q.get_str() << "," << specials << "\n"
         << std::flush;
    }
  }
  if (json) {
    nlohmann::ordered_json j;
    j["schema"] = "malpha-sum v1";
    j["alpha"] = alpha.describe();
    j["rel_tol"] = to_string(opts.rel_tol);
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
  }
}

// ---- bounds ----

std::string flags_of(const BoundReport& r) {
  std::string s;
  if (r.small_m) s = "small-M";
  if (r.a_next_exceeds_q) s += s.empty() ? "a_next_gt_q" : "|a_next_gt_q";
  return s.empty() ? "none" : s;
}

void cmd_bounds(const GridFlags& f, std::ostream& fallback) {
  const AlphaSpec alpha = parse_alpha(f.alpha);
  SumOptions opts = sum_options(f.common);
  const auto grid = resolve_grid(alpha, f.M, f.grid);
  const auto reports = ratio_scan(alpha, grid, opts);
  Sink sink(f.common.out, fallback);
  std::ostream& os = sink.os();
  if (f.common.format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = "malpha-bounds v1";
    j["alpha"] = alpha.describe();
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json row;
      row["M"] = r.M;
      row["k"] = r.k;
      row["q_k"] = r.q_k.get_str();
      row["a_next"] = r.a_next.get_str();
      row["S_lo_approx"] = lo_str(r.s_m.lo());
      row["S_hi_approx"] = hi_str(r.s_m.hi());
      row["lower_ref_approx"] = mid_str(r.lower_ref);
      row["upper_ref_approx"] = mid_str(r.upper_ref);
      row["upper_improved_ref_approx"] = mid_str(r.upper_improved_ref);
      row["ratio_lower_approx"] = mid_str(r.ratio_lower);
      row["ratio_upper_approx"] = mid_str(r.ratio_upper);
      row["ratio_improved_approx"] = mid_str(r.ratio_improved);
      row["ratio_mlnm_approx"] = r.ratio_mlnm ? nlohmann::ordered_json(mid_str(*r.ratio_mlnm)) : nullptr;
      row["small_m"] = r.small_m;
      row["a_next_gt_q"] = r.a_next_exceeds_q;
      rows.push_back(std::move(row));
    }
    os << j.dump(2) << "\n";
    return;
  }
  os << header("bounds", alpha)
     << "M,k,q_k,a_next,S_lo_approx,S_hi_approx,lower_ref_approx,upper_ref_approx,upper_improved_ref_approx,"
        "ratio_lower_approx,ratio_upper_approx,ratio_improved_approx,ratio_mlnm_approx,flags\n";
  for (const auto& r : reports) {
    os << r.M << "," << r.k << "," << r.q_k.get_str() << "," << r.a_next.get_str() << "," << lo_str(r.s_m.lo())
       << "," << hi_str(r.s_m.hi()) << "," << mid_str(r.lower_ref) << "," << mid_str(r.upper_ref) << ","
       << mid_str(r.upper_improved_ref) << "," << mid_str(r.ratio_lower) << "," << mid_str(r.ratio_upper) << ","
       << mid_str(r.ratio_improved) << "," << (r.ratio_mlnm ? mid_str(*r.ratio_mlnm) : "NA") << ","
       << flags_of(r) << "\n";
  }
}

// ---- experiment ----

struct ExperimentFlags {
  CommonFlags common;
  std::string csv;
  std::string K = "2000";
  std::string N = "50";
  std::string seed = "0";
  std::string phi = "1";
  std::string bits = "0";
  std::string M = "100000";
  std::string k_min = "100";
  bool inject_golden = false;
};

void emit_experiment(const ExperimentResult& r, const ExperimentFlags& f, std::ostream& fallback) {
  if (!f.csv.empty()) {
    Sink csv(f.csv, fallback);
    csv.os() << r.samples_csv();
  }
  Sink sink(f.common.out, fallback);
  if (f.common.format == "csv") {
    sink.os() << r.samples_csv();
  } else {
    sink.os() << r.to_json().dump(2) << "\n";
  }
}

ExperimentOptions experiment_options(const ExperimentFlags& f) {
  ExperimentOptions o;
  o.master_seed = parse_count(f.seed, "--seed");
  o.samples = parse_count(f.N, "--N");
  const std::uint64_t bits = parse_count(f.bits, "--bits");
  if (bits != 0 && (bits < 64 || bits > (1u << 24))) throw InvalidInput("--bits must be 0 or in [64, 2^24]");
  o.bits = static_cast<std::uint32_t>(bits);
  if (f.inject_golden) o.injected.push_back(AlphaSpec::golden());
  o.sum = sum_options(f.common);
  return o;
}

void cmd_experiment(const std::string& which, const ExperimentFlags& f, std::ostream& fallback) {
  const ExperimentOptions o = experiment_options(f);
  const std::size_t K = parse_count(f.K, "--K");
  ExperimentResult r;
  if (which == "levy") {
    r = levy_experiment(K, o);
  } else if (which == "khinchin") {
    r = khinchin_io_experiment(PhiSpec::parse(f.phi), K, o);
  } else if (which == "growth") {
    r = growth_criterion_experiment(PhiSpec::parse(f.phi), parse_count(f.M, "--M"), o);
  } else {
    r = eventual_event_experiment(K, parse_count(f.k_min, "--k-min"), o);
  }
  emit_experiment(r, f, fallback);
}

int report(std::ostream& err, int code, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sums of reciprocals of ||m alpha|| and continued-fraction experiments", "malpha"};
  app.require_subcommand(1);

  ExpandFlags expand;
  auto* expand_cmd = app.add_subcommand("expand", "partial quotients and convergents");
  add_alpha_flags(expand_cmd, expand.alpha);
  add_common_flags(expand_cmd, expand.common);
  expand_cmd->add_option("--depth", expand.depth, "number of quotients (default: all for rationals, 20 otherwise)");

  GridFlags sum;
  auto* sum_cmd = app.add_subcommand("sum", "enclosures of S_M");
  add_alpha_flags(sum_cmd, sum.alpha);
  add_common_flags(sum_cmd, sum.common);
  sum_cmd->add_option("--M", sum.M, "M, or the grid maximum with --grid q");
  sum_cmd->add_option("--grid", sum.grid, "increasing list M1,M2,... or q for convergent denominators");

  GridFlags bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "S_M against its reference bounds");
  add_alpha_flags(bounds_cmd, bounds.alpha);
  add_common_flags(bounds_cmd, bounds.common);
  bounds_cmd->add_option("--M", bounds.M, "M, or the grid maximum with --grid q");
  bounds_cmd->add_option("--grid", bounds.grid, "increasing list M1,M2,... or q for convergent denominators");

  ExperimentFlags exp;
  exp.common.format = "json";
  auto* exp_cmd = app.add_subcommand("experiment", "seeded ensemble experiments");
  exp_cmd->require_subcommand(1);
  std::string which;
  for (const char* name : {"levy", "khinchin", "growth", "eventual"}) {
    auto* sub = exp_cmd->add_subcommand(name);
    add_common_flags(sub, exp.common);
    sub->add_option("--csv", exp.csv, "also write per-sample CSV here");
    sub->add_option("--K", exp.K, "depth");
    sub->add_option("--N", exp.N, "number of random samples");
    sub->add_option("--seed", exp.seed, "master seed");
    sub->add_option("--bits", exp.bits, "bits per random alpha (0: from depth)");
    sub->add_flag("--inject-golden", exp.inject_golden, "append the golden ratio as a fixed sample");
    if (std::string(name) == "khinchin" || std::string(name) == "growth") {
      sub->add_option("--phi", exp.phi, "phi, e.g. 1, log2, k*log2k");
    }
    if (std::string(name) == "growth") sub->add_option("--M", exp.M, "largest M");
    if (std::string(name) == "eventual") sub->add_option("--k-min", exp.k_min, "first k of the window");
    sub->callback([&which, name] { which = name; });
  }
  exp_cmd->description("seeded ensemble experiments: levy, khinchin, growth, eventual");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*expand_cmd) {
      cmd_expand(expand, out);
    } else if (*sum_cmd) {
      cmd_sum(sum, out);
    } else if (*bounds_cmd) {
      cmd_bounds(bounds, out);
    } else {
      cmd_experiment(which, exp, out);
    }
  } catch (const InvalidInput& e) {
    return report(err, kInvalidInput, e);
  } catch (const DegenerateRational& e) {
    return report(err, kInvalidInput, e);
  } catch (const ExpansionExhausted& e) {
    return report(err, kExhausted, e);
  } catch (const HorizonExceeded& e) {
    return report(err, kExhausted, e);
  } catch (const CapExceeded& e) {
    return report(err, kExhausted, e);
  } catch (const CycleNotFound& e) {
    return report(err, kExhausted, e);
  } catch (const BudgetExceeded& e) {
    return report(err, kBudget, e);
  } catch (const Error& e) {
    return report(err, kFailure, e);
  }
  return kOk;
}

}  // namespace malpha::cli
