#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ewens/esf.hpp"
#include "ewens/hahn.hpp"
#include "ewens/identities.hpp"
#include "ewens/oracle.hpp"
#include "ewens/parallel.hpp"
#include "ewens/sampling.hpp"
#include "ewens/scalar.hpp"
#include "ewens/spectral.hpp"
#include "ewens/spectral_float.hpp"
#include "ewens/verify.hpp"

namespace ewens::cli {
namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { json, csv, plain };

Format parse_format(const std::string& text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  if (text == "plain") return Format::plain;
  throw UsageError("unknown format '" + text + "' (expected json, csv or plain)");
}

struct RunConfig {
  std::string command;
  std::vector<int> ns;
  std::vector<std::string> thetas;
  Mode mode = Mode::exact;
  Format format = Format::plain;
  std::optional<std::uint64_t> seed;
  std::optional<long> count;
  int streams = 1;
  int threads = 1;
  std::string weights_file;
  std::string weights_inline;
  std::string weights_fn;
  std::string suites;
  std::string which;
  int random_vectors = 200;
  bool conditioned = false;
  bool per_cell = false;  // verify --grid in JSON: one object per (n, theta) cell
};

// "2-30", "2,3,5", "2-4,10".
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      if (auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw UsageError("empty range '" + item + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoi(item));
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list '" + text + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Cell outputs are collected per (theta, n) and written in grid order.
struct CellOutput {
  std::vector<json> records;
  bool passed = true;
  std::string raw;  // pre-rendered text for matrix/table commands
};

template <Field T>
json jv(const T& v) {
  if constexpr (is_exact_v<T>) return render(v); else return v;
}

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_number_float()) s = render(v.get<double>());
  else s = v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
  return s;
}

std::string plain_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return render(v.get<double>());
  return v.dump();
}

void emit_records(std::ostream& os, Format format, const std::vector<std::string>& columns,
                  const std::vector<CellOutput>& cells) {
  if (format == Format::csv) {
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
    os << '\n';
  }
  for (const CellOutput& cell : cells) {
    for (const json& rec : cell.records) {
      if (format == Format::json) {
        os << rec.dump() << '\n';
      } else if (format == Format::csv) {
        for (std::size_t k = 0; k < columns.size(); ++k)
          os << (k ? "," : "") << (rec.contains(columns[k]) ? csv_cell(rec[columns[k]]) : "");
        os << '\n';
      } else {
        bool first = true;
        for (const std::string& col : columns) {
          if (!rec.contains(col)) continue;
          os << (first ? "" : " ") << col << '=' << plain_value(rec[col]);
          first = false;
        }
        os << '\n';
      }
    }
  }
}

template <Field T>
ThetaParam<T> theta_param(const std::string& text) {
  try {
    return ThetaParam<T>(parse_field<T>(text));
  } catch (const InvalidTheta& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --theta: ") + e.what());
  }
}

// ---- weight vectors ------------------------------------------------------

template <Field T>
std::vector<T> read_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read weight file '" + path + "'");
  std::vector<T> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_field<T>(line));
    } catch (const std::invalid_argument& e) {
      throw UsageError("weight file '" + path + "': " + e.what());
    }
  }
  return out;
}

// Irrational weight families exist only in float mode.
template <Field T>
std::vector<T> weight_function(const std::string& spec, int n, const ThetaParam<T>& theta) {
  std::vector<T> out;
  if (spec == "ones") return ones_weight<T>(n).a;
  if (spec == "extremal") return extremal_weights(n, theta).a;
  if (spec.rfind("unit:", 0) == 0) {
    const int j = std::stoi(spec.substr(5));
    if (j < 1 || j > n) throw UsageError("unit:J needs 1 <= J <= n");
    return unit_weight<T>(n, j).a;
  }
  if (spec == "log") {
    if constexpr (is_exact_v<T>) {
      throw UsageError("weights 'log' are irrational; use --mode float");
    } else {
      for (int j = 1; j <= n; ++j) out.push_back(std::log(static_cast<double>(j)));
      return out;
    }
  }
  if (spec.rfind("frac:", 0) == 0) {
    // {x j}; x may be a literal or sqrt(N).
    const std::string x_text = spec.substr(5);
    if (x_text.rfind("sqrt(", 0) == 0 && x_text.back() == ')') {
      if constexpr (is_exact_v<T>) {
        throw UsageError("weights 'frac:sqrt(..)' are irrational; use --mode float");
      } else {
        const double x = std::sqrt(parse_double(x_text.substr(5, x_text.size() - 6)));
        for (int j = 1; j <= n; ++j) {
          const double v = x * j;
          out.push_back(v - std::floor(v));
        }
        return out;
      }
    }
    const T x = parse_field<T>(x_text);
    for (int j = 1; j <= n; ++j) {
      T v = x * j;
      if constexpr (is_exact_v<T>) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        out.push_back(T(v - fl));
      } else {
        out.push_back(v - std::floor(v));
      }
    }
    return out;
  }
  throw UsageError("unknown --weights-fn '" + spec + "'");
}

template <Field T>
std::optional<WeightVector<T>> load_weights(const RunConfig& cfg, int n, const ThetaParam<T>& theta) {
  const int given = !cfg.weights_file.empty() + !cfg.weights_inline.empty() + !cfg.weights_fn.empty();
  if (given > 1) throw UsageError("give at most one of --weights, --a, --weights-fn");
  std::vector<T> a;
  if (!cfg.weights_file.empty()) {
    a = read_weight_file<T>(cfg.weights_file);
  } else if (!cfg.weights_inline.empty()) {
    for (const std::string& item : split_list(cfg.weights_inline)) {
      try {
        a.push_back(parse_field<T>(item));
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--a: ") + e.what());
      }
    }
  } else if (!cfg.weights_fn.empty()) {
    a = weight_function<T>(cfg.weights_fn, n, theta);
  } else {
    return std::nullopt;
  }
  if (static_cast<int>(a.size()) != n)
    throw UsageError("weight vector has " + std::to_string(a.size()) + " entries, expected n = " +
                     std::to_string(n));
  return WeightVector<T>(std::move(a));
}

template <Field T>
json weights_json(const WeightVector<T>& a) {
  json arr = json::array();
  for (const T& v : a.a) arr.push_back(jv(v));
  return arr;
}

// ---- commands ------------------------------------------------------------

template <Field T>
CellOutput cell_tau(const RunConfig&, int n, const ThetaParam<T>& theta) {
  if (n < 2) throw UsageError("tau needs n >= 2");
  const ThetaTable<T> th(theta, n);
  const T tau = tau_closed(theta);
  const T via_mu = 1 + theta.value() * mu_closed(2, theta);
  const T ratio = rayleigh_ratio(th, extremal_weights(n, theta));
  const bool ok = field_equal<T>(tau, via_mu, 1e-12) && field_equal<T>(tau, ratio, 1e-12);
  CellOutput cell;
  cell.passed = ok;
  cell.records.push_back({{"n", n},
                          {"theta", render(theta.value())},
                          {"mode", std::string(to_string(FieldTraits<T>::mode))},
                          {"tau_closed", jv(tau)},
                          {"one_plus_theta_mu2", jv(via_mu)},
                          {"rayleigh_extremal", jv(ratio)},
                          {"verdict", ok ? "pass" : "fail"}});
  return cell;
}

template <Field T>
CellOutput cell_spectrum(const RunConfig&, int n, const ThetaParam<T>& theta) {
  if (n < 2) throw UsageError("spectrum needs n >= 2");
  CellOutput cell;
  const ThetaTable<T> th(theta, n);
  if constexpr (is_exact_v<T>) {
    const Matrix<T> r = triangularize(th);
    const bool triangular = is_upper_triangular(r);
    for (int k = 1; k <= n; ++k) {
      const T mu = mu_closed(k, theta);
      const bool eq = r(k - 1, k - 1) == mu;
      cell.passed = cell.passed && eq && triangular;
      cell.records.push_back({{"n", n}, {"theta", render(theta.value())}, {"r", k},
                              {"mu_closed", render(mu)}, {"r_diagonal", render(r(k - 1, k - 1))},
                              {"equal", eq}, {"triangular", triangular}});
    }
  } else {
    for (const SpectrumRow& row : match_spectrum(th)) {
      cell.passed = cell.passed && row.abs_err <= 1e-8;
      cell.records.push_back({{"n", n}, {"theta", render(theta.value())}, {"r", row.r},
                              {"mu_closed", row.mu_closed}, {"mu_numeric", row.mu_numeric},
                              {"abs_err", row.abs_err}});
    }
  }
  return cell;
}

template <Field T>
CellOutput cell_matrix(const RunConfig& cfg, int n, const ThetaParam<T>& theta) {
  if (n < 2) throw UsageError("matrix needs n >= 2");
  const ThetaTable<T> th(theta, n);
  const std::string which = cfg.which.empty() ? (is_exact_v<T> ? "kernel" : "m") : cfg.which;
  std::string csv;
  if (which == "kernel") csv = to_csv(build_kernel(th).c);
  else if (which == "u") csv = to_csv(exp_l_gauge(th));
  else if (which == "r") csv = to_csv(triangularize(th));
  else if (which == "l-gauge") csv = to_csv(build_l_gauge(th));
  else if (which == "m" || which == "l" || which == "v" || which == "w") {
    if constexpr (is_exact_v<T>) {
      throw UsageError("matrix '" + which + "' has irrational entries; use --mode float");
    } else {
      const Eigen::MatrixXd l = build_l_float(th);
      Eigen::MatrixXd m;
      if (which == "m") m = build_m_float(th);
      else if (which == "l") m = l;
      else if (which == "v") m = nilpotent_exp_float(l);
      else m = nilpotent_exp_float(l) * build_m_float(th) * nilpotent_exp_float(-l);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) csv += (j ? "," : "") + render(m(i, j));
        csv += '\n';
      }
    }
  } else {
    throw UsageError("unknown --which '" + which + "' (kernel, u, r, l-gauge, m, l, v, w)");
  }
  CellOutput cell;
  if (cfg.format == Format::json) {
    json rows = json::array();
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
      json row = json::array();
      for (const std::string& v : split_list(line)) {
        if constexpr (is_exact_v<T>) row.push_back(v); else row.push_back(parse_double(v));
      }
      rows.push_back(row);
    }
    cell.raw = json{{"n", n}, {"theta", render(theta.value())}, {"which", which}, {"rows", rows}}.dump() + "\n";
  } else {
    cell.raw = csv;
  }
  return cell;
}

template <Field T>
CellOutput cell_hahn(const RunConfig& cfg, int n, const ThetaParam<T>& theta) {
  if (n < 2) throw UsageError("hahn needs n >= 2");
  const ThetaTable<T> th(theta, n);
  const HahnBasis<T> basis(th);
  CellOutput cell;
  for (int l = 0; l < n && cell.passed; ++l)
    for (int r = l + 1; r < n; ++r)
      if (!field_equal<T>(basis.inner_product(l, r), from_int<T>(0), 1e-9)) cell.passed = false;
  if (cfg.format == Format::json) {
    json q = json::array(), pi = json::array();
    for (int r = 0; r < n; ++r) {
      json row = json::array();
      for (int j = 1; j <= n; ++j) row.push_back(jv(basis.q(r, j)));
      q.push_back(row);
      pi.push_back(jv(basis.pi_sq(r)));
    }
    cell.raw = json{{"n", n}, {"theta", render(theta.value())}, {"q", q}, {"pi_sq", pi},
                    {"orthogonal", cell.passed}}.dump() + "\n";
    return cell;
  }
  std::string text = "j";
  for (int r = 0; r < n; ++r) text += ",q" + std::to_string(r);
  text += '\n';
  for (int j = 1; j <= n; ++j) {
    text += std::to_string(j);
    for (int r = 0; r < n; ++r) text += "," + render(basis.q(r, j));
    text += '\n';
  }
  if (cfg.format == Format::plain) {
    text += "pi_sq";
    for (int r = 0; r < n; ++r) text += "," + render(basis.pi_sq(r));
    text += '\n';
  }
  cell.raw = text;
  return cell;
}

template <Field T>
CellOutput cell_identities(const RunConfig&, int n, const ThetaParam<T>& theta, bool generic) {
  CellOutput cell;
  for (const IdentityRecord& rec : identity_records(n, theta, generic)) {
    cell.passed = cell.passed && rec.holds;
    json j = to_json(rec);
    j["n"] = n;
    j["theta"] = render(theta.value());
    cell.records.push_back(std::move(j));
  }
  return cell;
}

template <Field T>
json oracle_json(const OracleReport<T>& rep) {
  return {{"n", rep.n},
          {"theta", render(rep.theta)},
          {"a", weights_json(rep.a)},
          {"mean_exact", jv(rep.mean_exact)},
          {"var_exact", jv(rep.var_exact)},
          {"mean_formula", jv(rep.mean_formula)},
          {"var_formula", jv(rep.var_formula)},
          {"agree", rep.agree}};
}

template <Field T>
CellOutput cell_oracle(const RunConfig& cfg, int n, const ThetaParam<T>& theta) {
  if (n > kMaxEnumerationN) throw UsageError("oracle enumeration needs n <= 40");
  const ThetaTable<T> th(theta, n);
  const EnumeratedMeasure<T> measure = enumerate_measure(th);
  CellOutput cell;
  auto report = [&](const WeightVector<T>& a) {
    const OracleReport<T> rep = oracle_mean_var(th, measure, a);
    cell.passed = cell.passed && rep.agree;
    cell.records.push_back(oracle_json(rep));
  };
  if (auto a = load_weights(cfg, n, theta)) {
    report(*a);
  } else {
    const long count = cfg.count.value_or(200);
    if (count < 1) throw UsageError("--count must be >= 1");
    Rng rng = make_stream_rng(cfg.seed.value_or(1), static_cast<std::uint64_t>(n));
    for (long k = 0; k < count; ++k)
      report(WeightVector<T>(convert_vector<T>(random_rational_vector(n, rng))));
  }
  if (n <= kMaxPermutationN) {
    const bool ok = enumerate_permutations_check(th);
    cell.passed = cell.passed && ok;
    cell.records.push_back({{"n", n}, {"theta", render(theta.value())}, {"check", "permutation_measure"},
                            {"agree", ok}});
  }
  return cell;
}

template <Field T>
CellOutput cell_sample(const RunConfig& cfg, int n, const ThetaParam<T>& theta) {
  const long count = cfg.count.value_or(100000);
  if (count < 2) throw UsageError("--count must be >= 2");
  const std::uint64_t seed = cfg.seed.value_or(1);
  const ThetaTable<T> th(theta, n);
  WeightVector<T> a = load_weights(cfg, n, theta).value_or(ones_weight<T>(n));
  std::vector<double> af;
  for (const T& v : a.a) af.push_back(to_double(v));
  const ThetaTable<double> thf(ThetaParam<double>(to_double(theta.value())), n);
  CellOutput cell;

  if (cfg.conditioned) {
    if (n > kMaxConditionedPoissonN) throw UsageError("--conditioned needs n <= 8");
    const ConditionedPoissonReport rep = conditioned_poisson_check(thf, af, count, seed);
    cell.passed = rep.passed;
    cell.records.push_back({{"n", n}, {"theta", render(theta.value())}, {"check", "conditioned_poisson"},
                            {"attempts", rep.attempts}, {"accepted", rep.accepted},
                            {"floor_met", rep.floor_met}, {"max_abs_z", rep.frequencies.max_abs_z},
                            {"frequencies_pass", rep.frequencies.passed},
                            {"var_mc", rep.conditional.variance}, {"var_se", rep.conditional.variance_se},
                            {"var_formula", rep.variance_formula}, {"z", rep.variance_z},
                            {"pass", rep.passed}});
    return cell;
  }

  const McEstimate est = mc_variance_estimate(n, thf.theta(), af, count, seed, cfg.streams, cfg.threads);
  const double var_formula = to_double(variance_statistic(th, a));
  const double mean_formula = to_double(mean_statistic(th, a));
  const double theta_b = to_double(T(theta.value() * b_form(th, a)));
  const double z = est.variance_se > 0 ? (est.variance - var_formula) / est.variance_se
                                       : (std::fabs(est.variance - var_formula) <= 1e-9 ? 0.0 : INFINITY);
  json rec{{"n", n}, {"theta", render(theta.value())}, {"count", count}, {"seed", seed},
           {"streams", cfg.streams}, {"mean_mc", est.mean}, {"mean_se", est.mean_se},
           {"mean_formula", mean_formula}, {"var_mc", est.variance}, {"var_se", est.variance_se},
           {"var_formula", var_formula}, {"z", z}};
  bool ok = std::fabs(z) <= kSigmaThreshold;
  if (n >= 2 && theta_b > 0) {
    const double tau = to_double(tau_closed(theta));
    const double ratio = est.variance / theta_b;
    const double ratio_se = est.variance_se / theta_b;
    const bool bound_ok = ratio - kSigmaThreshold * ratio_se <= tau;
    rec["ratio_mc"] = ratio;
    rec["ratio_se"] = ratio_se;
    rec["tau"] = tau;
    rec["bound_ok"] = bound_ok;
    ok = ok && bound_ok;
  }
  rec["pass"] = ok;
  cell.passed = ok;
  cell.records.push_back(std::move(rec));
  return cell;
}

template <Field T>
CellOutput cell_verify(const RunConfig& cfg, int n, const ThetaParam<T>& theta, bool generic) {
  const std::vector<Suite> suites = parse_suites(cfg.suites);
  VerifyOptions opts;
  opts.seed = cfg.seed.value_or(1);
  opts.random_vectors = cfg.random_vectors;
  opts.generic_identities = generic;
  CellOutput cell;
  for (Suite s : suites) {
    if (n < 2 && s != Suite::oracle && s != Suite::identities)
      throw UsageError(std::string(to_string(s)) + " suite needs n >= 2");
    if (s == Suite::oracle && n > 12) throw UsageError("oracle suite needs n <= 12");
    for (const CheckResult& r : run_suite(s, n, theta, opts)) {
      cell.passed = cell.passed && r.holds;
      json j = to_json(r);
      j["status"] = r.holds ? "PASS" : "FAIL";
      cell.records.push_back(std::move(j));
    }
  }
  return cell;
}

// ---- driver ----------------------------------------------------------------

template <Field T>
int execute(const RunConfig& cfg, std::ostream& os) {
  std::vector<ThetaParam<T>> thetas;
  for (const std::string& t : cfg.thetas) thetas.push_back(theta_param<T>(t));
  struct Cell {
    std::size_t theta_index;
    int n;
    bool first_for_theta;
  };
  std::vector<Cell> grid;
  for (std::size_t t = 0; t < thetas.size(); ++t)
    for (std::size_t k = 0; k < cfg.ns.size(); ++k) grid.push_back({t, cfg.ns[k], k == 0});
  for (const Cell& c : grid)
    if (c.n < 1) throw UsageError("n must be >= 1");

  auto run_cell = [&](std::size_t i) -> CellOutput {
    const Cell& c = grid[i];
    const ThetaParam<T>& theta = thetas[c.theta_index];
    const std::string& cmd = cfg.command;
    if (cmd == "tau") return cell_tau(cfg, c.n, theta);
    if (cmd == "spectrum") return cell_spectrum(cfg, c.n, theta);
    if (cmd == "matrix") return cell_matrix(cfg, c.n, theta);
    if (cmd == "hahn") return cell_hahn(cfg, c.n, theta);
    if (cmd == "identities") return cell_identities(cfg, c.n, theta, c.first_for_theta);
    if (cmd == "oracle") return cell_oracle(cfg, c.n, theta);
    if (cmd == "sample") return cell_sample(cfg, c.n, theta);
    if (cmd == "verify") return cell_verify(cfg, c.n, theta, c.first_for_theta);
    throw UsageError("unknown command " + cmd);
  };
  // Sampling parallelizes across streams instead of cells.
  const int cell_threads = cfg.command == "sample" ? 1 : cfg.threads;
  const std::vector<CellOutput> cells = parallel_map(grid.size(), cell_threads, run_cell);

  bool passed = true;
  for (const CellOutput& c : cells) passed = passed && c.passed;

  static const std::map<std::string, std::vector<std::string>> columns{
      {"tau", {"n", "theta", "mode", "tau_closed", "one_plus_theta_mu2", "rayleigh_extremal", "verdict"}},
      {"spectrum", is_exact_v<T>
                       ? std::vector<std::string>{"n", "theta", "r", "mu_closed", "r_diagonal", "equal", "triangular"}
                       : std::vector<std::string>{"n", "theta", "r", "mu_closed", "mu_numeric", "abs_err"}},
      {"identities", {"identity", "n", "theta", "params", "holds", "lhs", "rhs"}},
      {"oracle", {"n", "theta", "check", "a", "mean_exact", "var_exact", "mean_formula", "var_formula", "agree"}},
      {"sample", {"n", "theta", "check", "count", "seed", "streams", "attempts", "accepted", "floor_met",
                  "max_abs_z", "frequencies_pass", "mean_mc", "mean_se", "mean_formula", "var_mc", "var_se",
                  "var_formula", "z", "ratio_mc", "ratio_se", "tau", "bound_ok", "pass"}},
      {"verify", {"status", "suite", "check", "n", "theta", "holds", "detail"}},
  };
  if (cfg.per_cell && cfg.format == Format::json) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      json checks = json::array();
      for (json r : cells[i].records) {
        r.erase("n");
        r.erase("theta");
        checks.push_back(std::move(r));
      }
      json line{{"n", grid[i].n},
                {"theta", render(thetas[grid[i].theta_index].value())},
                {"mode", to_string(cfg.mode)},
                {"status", cells[i].passed ? "PASS" : "FAIL"},
                {"checks", std::move(checks)}};
      os << line.dump() << '\n';
    }
  } else if (auto it = columns.find(cfg.command); it != columns.end()) {
    if (cfg.command == "identities" && cfg.format == Format::plain) {
      // Plain identity output is a per-identity summary.
      std::vector<std::string> order;
      std::map<std::string, std::pair<long, long>> tally;
      for (const CellOutput& c : cells)
        for (const json& r : c.records) {
          const std::string id = r["identity"];
          if (!tally.count(id)) order.push_back(id);
          ++tally[id].first;
          if (!r["holds"].get<bool>()) ++tally[id].second;
        }
      for (const std::string& id : order)
        os << id << ": evaluated=" << tally[id].first << " failed=" << tally[id].second << '\n';
    } else {
      emit_records(os, cfg.format, it->second, cells);
    }
  } else {
    for (const CellOutput& c : cells) os << c.raw;
  }
  if (cfg.command == "verify" && cfg.format == Format::plain) {
    long total = 0, failed = 0;
    for (const CellOutput& c : cells)
      for (const json& r : c.records) {
        ++total;
        if (!r["holds"].get<bool>()) ++failed;
      }
    os << "summary: checks=" << total << " failed=" << failed << '\n';
  }
  return passed ? kExitPass : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string n_text, theta_text, grid, mode = "exact", format, out_path;
  long long seed_value = -1;
  long count_value = -1;

  CLI::App app{"Variance statistics of additive functions on Ewens random permutations", "ewensctl"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"tau", "Sharp variance constant and its attaining weight vector"},
      {"spectrum", "Closed-form vs computed spectrum of the quadratic-form matrix"},
      {"matrix", "Export a matrix as CSV"},
      {"hahn", "Export the Hahn polynomial table"},
      {"identities", "Evaluate the hypergeometric and binomial identity grid"},
      {"oracle", "Exhaustive enumeration against the closed-form mean and variance"},
      {"sample", "Monte Carlo variance of an additive statistic"},
      {"verify", "Run invariant suites"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--n", n_text, "Permutation size; lists such as 2-10,20 sweep");
    sub->add_option("--theta", theta_text, "Ewens parameter, p/q or decimal; comma list sweeps");
    sub->add_option("--grid", grid, "N_LIST:THETA_LIST, e.g. 2-30:1/3,1/2,1,2,7/3,5");
    sub->add_option("--mode", mode, "exact or float")->capture_default_str();
    sub->add_option("--format", format, "json, csv or plain");
    sub->add_option("--out", out_path, "Write the report to this file");
    sub->add_option("--seed", seed_value, "64-bit seed for random vectors and sampling");
    sub->add_option("--count", count_value, "Sample or random-vector count");
    sub->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    if (name == "sample" || name == "oracle") {
      sub->add_option("--weights", cfg.weights_file, "Weight file, one value per line");
      sub->add_option("--a", cfg.weights_inline, "Inline weights, comma separated");
      sub->add_option("--weights-fn", cfg.weights_fn, "ones | extremal | unit:J | log | frac:X");
    }
    if (name == "sample") {
      sub->add_option("--streams", cfg.streams, "Independent RNG streams")->capture_default_str();
      sub->add_flag("--conditioned", cfg.conditioned, "Conditioned-Poisson check instead (n <= 8)");
    }
    if (name == "verify") {
      sub->add_option("--suites", cfg.suites, "spectral,hahn,identities,oracle,remark")->required();
      sub->add_option("--random", cfg.random_vectors, "Random weight vectors per cell")->capture_default_str();
    }
    if (name == "matrix") sub->add_option("--which", cfg.which, "kernel | u | r | l-gauge | m | l | v | w");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.mode = parse_mode(mode);
    std::string default_format = "plain";
    if (cfg.command == "matrix" || cfg.command == "hahn") default_format = "csv";
    if (cfg.command == "verify" && !grid.empty()) default_format = "json";
    cfg.format = parse_format(format.empty() ? default_format : format);
    cfg.per_cell = cfg.command == "verify" && !grid.empty();
    if (seed_value >= 0) cfg.seed = static_cast<std::uint64_t>(seed_value);
    else if (seed_value != -1) throw UsageError("--seed must be non-negative");
    if (count_value != -1) cfg.count = count_value;
    if (cfg.threads < 1) throw UsageError("--threads must be >= 1");
    if (cfg.streams < 1) throw UsageError("--streams must be >= 1");
    if (cfg.random_vectors < 0) throw UsageError("--random must be >= 0");
    if (cfg.command == "verify") parse_suites(cfg.suites);

    if (!grid.empty()) {
      if (!n_text.empty() || !theta_text.empty()) throw UsageError("--grid replaces --n and --theta");
      const auto colon = grid.find(':');
      if (colon == std::string::npos) throw UsageError("--grid expects N_LIST:THETA_LIST");
      cfg.ns = parse_int_list(grid.substr(0, colon));
      cfg.thetas = split_list(grid.substr(colon + 1));
    } else {
      if (theta_text.empty()) throw UsageError("--theta is required (no default)");
      if (n_text.empty()) throw UsageError("--n is required");
      cfg.ns = parse_int_list(n_text);
      cfg.thetas = split_list(theta_text);
    }
    if (cfg.thetas.empty()) throw UsageError("no theta values given");

    std::ofstream file;
    std::ostream* os = &out;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw UsageError("cannot open --out file '" + out_path + "'");
      os = &file;
    }
    return cfg.mode == Mode::exact ? execute<Rational>(cfg, *os) : execute<double>(cfg, *os);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SpectralDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace ewens::cli
