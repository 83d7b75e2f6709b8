#pragma once
//
// netkit command-line front end. Kept in a header so the test suite can
// drive run() in-process; tools/main.cpp is a thin wrapper.
//
// Output tables are CSV (a '#' comment line with units, then a header row)
// or json-lines records carrying schema_version. Numbers are printed with
// 10 significant digits through std::to_chars, which ignores the locale.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "netkit/montecarlo.hpp"
#include "netkit/parallel.hpp"
#include "netkit/rates.hpp"

namespace netkit::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tables

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

// Value as printed, re-read so JSON carries the same 10 digits.
inline double rounded(double v) {
  const std::string s = format_number(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::string command;
  std::string units;  // free text for the '#' line
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    return rounded(v);
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

inline void write_csv(const Table& t, std::ostream& os) {
  os << "# netkit " << t.command << " schema_version=" << kSchemaVersion;
  if (!t.units.empty()) os << "; " << t.units;
  os << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

inline void write_jsonl(const Table& t, std::ostream& os) {
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["command"] = t.command;
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
    os << rec.dump() << '\n';
  }
}

inline void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "jsonl") {
    write_jsonl(t, os);
  } else {
    write_csv(t, os);
  }
}

// ---------------------------------------------------------------------------
// Options

struct Options {
  std::string protocol = "conference";
  std::vector<int> n;
  std::string split = "full";
  std::vector<double> nbar{0.0};
  std::vector<double> distance;
  std::string distance_grid;
  std::optional<double> mu;
  double attenuation = 0.2;
  double xi = 0.95;
  int bits = 5;
  double delta_s = 4.3e-10;
  double delta_ec = 4.3e-10;
  double delta_pe = 4.3e-10;
  double p = 0.9;
  std::vector<double> block_size;
  bool finite_size = false;
  double pe_eta_offset = 0.0;
  double pe_nbar_offset = 0.0;
  std::string aep_log = "2";
  std::optional<double> shots;
  std::uint64_t seed = 20240601;
  std::string format = "csv";
  std::string out;
  std::string inject_fault;
  bool mc_raw = false;
};

inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw UsageError("bad number '" + item + "' in --distance-grid");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw UsageError("--distance-grid expects start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || !(stop >= start)) throw UsageError("--distance-grid needs step > 0 and stop >= start");
  const double span = (stop - start) / step;
  if (span > 1e6) throw UsageError("--distance-grid has too many points");
  // Index-based so the points do not accumulate rounding.
  const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid;
  for (long long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

template <class T>
void require_increasing(const std::vector<T>& v, const std::string& name) {
  if (v.empty()) throw UsageError(name + " grid is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw UsageError(name + " grid must be strictly increasing");
  }
}

inline std::size_t shot_count(const Options& o, double fallback) {
  const double s = o.shots.value_or(fallback);
  if (!(s >= 1.0) || s != std::floor(s) || s > 1e12) {
    throw UsageError("--shots must be a positive integer");
  }
  return static_cast<std::size_t>(s);
}

inline Protocol protocol_of(const Options& o) {
  const auto p = parse_protocol(o.protocol);
  if (!p) throw UsageError("unknown protocol '" + o.protocol + "'");
  return *p;
}

// "A,B", "full" (N/2, N - N/2), "dummy1" (N/2 - 1, N - N/2) or
// "dummy2" (N/2 - 1, N - N/2 - 1).
inline std::pair<int, int> split_for(const std::string& spec, int n) {
  const int half = n / 2;
  if (spec == "full") return {half, n - half};
  if (spec == "dummy1") return {half - 1, n - half};
  if (spec == "dummy2") return {half - 1, n - half - 1};
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw UsageError("--split expects A,B or full|dummy1|dummy2");
  int a = 0, b = 0;
  const auto ra = std::from_chars(spec.data(), spec.data() + comma, a);
  const auto rb = std::from_chars(spec.data() + comma + 1, spec.data() + spec.size(), b);
  if (ra.ec != std::errc() || rb.ec != std::errc() || rb.ptr != spec.data() + spec.size()) {
    throw UsageError("--split expects two integers A,B");
  }
  return {a, b};
}

inline std::vector<double> distances_of(const Options& o) {
  if (!o.distance.empty() && !o.distance_grid.empty()) {
    throw UsageError("give either --distance or --distance-grid, not both");
  }
  std::vector<double> d = o.distance_grid.empty() ? o.distance : parse_grid(o.distance_grid);
  if (d.empty()) d = {0.0};
  require_increasing(d, "distance");
  for (double v : d) {
    if (!(v >= 0.0)) throw DomainError("distances must be >= 0");
  }
  return d;
}

inline std::vector<int> users_of(const Options& o, std::vector<int> fallback) {
  std::vector<int> n = o.n.empty() ? std::move(fallback) : o.n;
  require_increasing(n, "--n");
  for (int v : n) {
    if (v < 2) throw UsageError("--n values must be >= 2");
  }
  return n;
}

inline std::vector<double> nbars_of(const Options& o) {
  require_increasing(o.nbar, "--nbar");
  for (double v : o.nbar) {
    if (!(v >= 0.0)) throw DomainError("--nbar values must be >= 0");
  }
  return o.nbar;
}

inline FiniteSizeParams finite_params(const Options& o) {
  FiniteSizeParams fs;
  fs.ec_efficiency = o.xi;
  fs.bits_per_quadrature = o.bits;
  fs.delta_s = o.delta_s;
  fs.delta_ec = o.delta_ec;
  fs.delta_pe = o.delta_pe;
  fs.success_prob = o.p;
  if (o.aep_log == "2") {
    fs.aep_log_base = LogBase::two;
  } else if (o.aep_log == "e") {
    fs.aep_log_base = LogBase::natural;
  } else {
    throw UsageError("--aep-log must be 2 or e");
  }
  try {
    fs.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return fs;
}

inline RateProblem problem_for(Protocol protocol, int n, const std::string& split, double nbar) {
  RateProblem p;
  p.protocol = protocol;
  p.n_users = n;
  p.nbar = nbar;
  if (is_secret_sharing(protocol)) {
    const auto [a, b] = split_for(split, n);
    p.n_a = a;
    p.n_b = b;
  }
  return p;
}

inline MuOptimum solve_mu(const RateProblem& p, const Options& o) {
  if (o.mu) {
    if (!(*o.mu >= 1.0)) throw DomainError("--mu must be >= 1");
    return MuOptimum{*o.mu, evaluate_rate(p, *o.mu)};
  }
  return optimize_mu(p);
}

// Chi at a pessimistic link for finite-size rows.
inline double chi_worst(const RateProblem& p, double mu, const Options& o) {
  if (o.pe_eta_offset == 0.0 && o.pe_nbar_offset == 0.0) return evaluate_rate(p, mu).holevo;
  const auto widened = widen_link(link_params(mu, p.eta, p.nbar), o.pe_eta_offset, o.pe_nbar_offset);
  RateProblem q = p;
  q.eta = widened.eta;
  q.nbar = widened.nbar;
  return evaluate_rate(q, mu).holevo;
}

// ---------------------------------------------------------------------------
// Commands

inline Table cmd_rate(const Options& o) {
  const Protocol protocol = protocol_of(o);
  const auto ns = users_of(o, {2});
  const auto nbars = nbars_of(o);
  const auto ds = distances_of(o);
  std::optional<FiniteSizeParams> fs;
  std::vector<double> blocks;
  if (o.finite_size) {
    fs = finite_params(o);
    blocks = o.block_size.empty() ? std::vector<double>{1e9} : o.block_size;
    require_increasing(blocks, "--block-size");
  }

  struct Job {
    RateProblem problem;
    double d;
  };
  std::vector<Job> jobs;
  for (int n : ns) {
    for (double nb : nbars) {
      for (double d : ds) {
        auto p = problem_for(protocol, n, o.split, nb);
        p.eta = eta_from_distance(DistanceMap{d, o.attenuation});
        if (fs) p.xi = fs->ec_efficiency;
        validate(p);
        jobs.push_back({p, d});
      }
    }
  }

  Table t;
  t.command = "rate";
  t.units = "d_km [km], d_m [m], eta [1], I chi rate plob r_n [bits/use]";
  t.columns = {"protocol", "n_users", "n_a", "n_b", "nbar", "d_km", "d_m", "eta", "mu_star", "I",
               "chi", "rate", "plob"};
  if (fs) {
    t.columns.push_back("block_size");
    t.columns.push_back("r_n");
  }
  std::vector<std::vector<std::vector<Cell>>> per_job(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& [p, d] = jobs[i];
    const auto best = solve_mu(p, o);
    const auto plob = plob_bound(p.eta);
    std::vector<Cell> base = {std::string(to_string(p.protocol)), (long long)p.n_users,
                              (long long)p.n_a, (long long)p.n_b, p.nbar, d, d * 1000.0, p.eta,
                              best.mu_star, best.report.mutual_info, best.report.holevo,
                              best.report.rate, plob ? Cell(*plob) : Cell(std::numeric_limits<double>::infinity())};
    if (!fs) {
      per_job[i].push_back(std::move(base));
      return;
    }
    const double chi = chi_worst(p, best.mu_star, o);
    for (double n : blocks) {
      FiniteSizeParams f = *fs;
      f.block_size = n;
      auto row = base;
      row.push_back(n);
      row.push_back(finite_size_rate(best.report.mutual_info, chi, f));
      per_job[i].push_back(std::move(row));
    }
  });
  for (auto& rows : per_job) {
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table cmd_max_distance(const Options& o) {
  const Protocol protocol = protocol_of(o);
  const auto ns = users_of(o, {2, 5, 10, 20, 50});
  const auto nbars = nbars_of(o);
  std::vector<RateProblem> jobs;
  for (int n : ns) {
    for (double nb : nbars) {
      auto p = problem_for(protocol, n, o.split, nb);
      validate(p);
      jobs.push_back(p);
    }
  }
  std::vector<double> dmax(jobs.size());
  MuRange range = kDefaultMuRange;
  if (o.mu) range = {*o.mu, *o.mu};
  parallel_for(jobs.size(), [&](std::size_t i) { dmax[i] = max_distance(jobs[i], o.attenuation, range); });

  Table t;
  t.command = "max-distance";
  t.units = "d_max_km [km], d_max_m [m]";
  t.columns = {"protocol", "n_users", "n_a", "n_b", "nbar", "d_max_km", "d_max_m"};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& p = jobs[i];
    t.rows.push_back({std::string(to_string(p.protocol)), (long long)p.n_users, (long long)p.n_a,
                      (long long)p.n_b, p.nbar, dmax[i], dmax[i] * 1000.0});
  }
  return t;
}

inline Table cmd_finite_size(const Options& o) {
  const Protocol protocol = protocol_of(o);
  const auto ns = users_of(o, {10});
  const auto nbars = nbars_of(o);
  const auto ds = distances_of(o);
  const auto fs = finite_params(o);
  std::vector<double> blocks = o.block_size;
  if (blocks.empty()) {
    for (int e = 6; e <= 12; ++e) blocks.push_back(std::pow(10.0, e));
  }
  require_increasing(blocks, "--block-size");

  Table t;
  t.command = "finite-size";
  t.units = "d_km [km], I chi_worst r_asym r_n [bits/use]; block_size=inf marks the asymptotic row";
  t.columns = {"protocol", "n_users", "n_a", "n_b", "nbar", "d_km", "d_m", "eta", "mu_star",
               "xi", "block_size", "I", "chi_worst", "r_asym", "r_n"};
  for (int n : ns) {
    for (double nb : nbars) {
      for (double d : ds) {
        auto p = problem_for(protocol, n, o.split, nb);
        p.eta = eta_from_distance(DistanceMap{d, o.attenuation});
        p.xi = fs.ec_efficiency;
        validate(p);
        const auto best = solve_mu(p, o);
        const double chi = chi_worst(p, best.mu_star, o);
        const double info = best.report.mutual_info;
        const double asym = fs.ec_efficiency * info - chi;
        auto row_for = [&](double block, double r) {
          t.rows.push_back({std::string(to_string(p.protocol)), (long long)p.n_users,
                            (long long)p.n_a, (long long)p.n_b, p.nbar, d, d * 1000.0, p.eta,
                            best.mu_star, fs.ec_efficiency, block, info, chi, asym, r});
        };
        for (double block : blocks) {
          FiniteSizeParams f = fs;
          f.block_size = block;
          row_for(block, finite_size_rate(info, chi, f));
        }
        row_for(std::numeric_limits<double>::infinity(), asym);
      }
    }
  }
  return t;
}

inline Table cmd_mc_sample(const Options& o) {
  const auto ns = users_of(o, {3});
  if (ns.size() != 1) throw UsageError("mc-sample takes a single --n");
  if (o.nbar.size() != 1) throw UsageError("mc-sample takes a single --nbar");
  const auto ds = distances_of(o);
  if (ds.size() != 1) throw UsageError("mc-sample takes a single distance");
  const double mu = o.mu.value_or(20.0);
  if (!(mu >= 1.0)) throw DomainError("--mu must be >= 1");
  const auto cfg = make_network(ns[0], link_params(mu, eta_from_distance(DistanceMap{ds[0], o.attenuation}), o.nbar[0]));
  const auto shots = shot_count(o, 1000);
  SimOptions opt;
  opt.heterodyne = !o.mc_raw;
  const auto run = sample_protocol(cfg, shots, o.seed, opt);

  const int n = cfg.n_users;
  Table t;
  t.command = "mc-sample";
  t.units = "shot-noise units; seed=" + std::to_string(o.seed) + "; rng=" + kRngAlgorithm +
            "; rng_scheme=" + std::to_string(kRngSchemeVersion) + "; n_users=" + std::to_string(n) +
            "; mu=" + format_number(mu) + "; eta=" + format_number(cfg.link.eta) +
            "; nbar=" + format_number(cfg.link.nbar);
  t.columns.push_back("shot");
  for (int k = 2; k <= n; ++k) t.columns.push_back("gamma_q" + std::to_string(k));
  t.columns.push_back("gamma_p1");
  for (int k = 1; k <= n; ++k) t.columns.push_back("beta_q" + std::to_string(k));
  for (int k = 1; k <= n; ++k) t.columns.push_back("beta_p" + std::to_string(k));
  for (std::size_t s = 0; s < shots; ++s) {
    std::vector<Cell> row{(long long)s};
    for (int k = 0; k < n; ++k) row.push_back(run.gamma(static_cast<Eigen::Index>(s), k));
    for (int k = 0; k < 2 * n; ++k) row.push_back(run.beta(static_cast<Eigen::Index>(s), k));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string invariant;
  std::string case_label;
  double value = 0.0;      // observed discrepancy or statistic
  double threshold = 0.0;  // pass iff value <= threshold
  bool pass() const { return value <= threshold; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass()) return false;
    }
    return true;
  }
};

inline const std::vector<std::string>& verify_invariants() {
  static const std::vector<std::string> names = {
      "oracle-equivalence", "holevo-consistency",    "lossless-line",
      "full-house-identity", "mc-conditional-cov",   "mc-pair-mi"};
  return names;
}

inline VerifyReport run_verify(const Options& o) {
  if (!o.inject_fault.empty()) {
    const auto& names = verify_invariants();
    if (std::find(names.begin(), names.end(), o.inject_fault) == names.end()) {
      throw UsageError("unknown invariant '" + o.inject_fault + "' for --inject-fault");
    }
  }
  // Test mode: perturb the closed-form side of one invariant.
  auto injected = [&](const std::string& name) { return o.inject_fault == name; };
  auto fault = [&](const std::string& name) { return injected(name) ? 1e-6 : 0.0; };

  VerifyReport rep;
  auto label = [](int n, double mu, double eta, double nbar) {
    return "N=" + std::to_string(n) + " mu=" + format_number(mu) + " eta=" + format_number(eta) +
           " nbar=" + format_number(nbar);
  };

  for (int n = 2; n <= 8; ++n) {
    for (double mu : {1.0, 2.0, 10.0, 100.0}) {
      for (double eta : {0.1, 0.5, 0.9, 1.0}) {
        for (double nbar : {0.0, 0.05, 1.0}) {
          const auto cfg = make_network(n, link_params(mu, eta, nbar));
          const std::string lab = label(n, mu, eta, nbar);

          Matrix closed = network_conditional_cm(cfg).block();
          closed(0, 0) += fault("oracle-equivalence");
          double dev = 0.0;
          for (auto path : {OraclePath::dual, OraclePath::direct}) {
            dev = std::max(dev, detail::max_abs(closed - network_conditional_cm_oracle(cfg, path).block()));
          }
          rep.checks.push_back({"oracle-equivalence", lab, dev, 1e-9});

          // chi against S(B|gamma) - S(B without user 0 | gamma, beta_0)
          const auto full = network_conditional_cm(cfg);
          const double raw = von_neumann_entropy(full) - von_neumann_entropy(heterodyne_condition(full, 0));
          const double chi = conferencing_holevo(cfg) + fault("holevo-consistency");
          rep.checks.push_back({"holevo-consistency", "conference " + lab, std::abs(chi - raw), 1e-9});

          const auto sq = squeezed_network_cm(cfg);
          const double raw_sq = von_neumann_entropy(sq) - von_neumann_entropy(heterodyne_condition(sq, 0));
          rep.checks.push_back({"holevo-consistency", "squeezed-conference " + lab,
                                std::abs(squeezed_conferencing_holevo(cfg) - raw_sq), 1e-9});

          if (n % 2 == 0) {
            const auto split = make_split(n / 2, n / 2, cfg);
            const auto ab = secret_sharing_cm(split);
            const double raw_ss = von_neumann_entropy(ab) - von_neumann_entropy(heterodyne_condition(ab, 0));
            rep.checks.push_back({"holevo-consistency", "secret-sharing " + lab,
                                  std::abs(secret_sharing_holevo(split) - raw_ss), 1e-9});
          }

          if (eta == 1.0 && nbar == 0.0) {
            rep.checks.push_back({"lossless-line", lab,
                                  std::abs(conferencing_holevo(cfg) + fault("lossless-line")), 1e-9});
          }
        }
      }
    }
  }

  for (int n : {4, 10, 100}) {
    for (double mu : {2.0, 30.0}) {
      const auto link = link_params(mu, 0.9, 0.01);
      const double ss = secret_sharing_rate(make_split(n / 2, n / 2, make_network(n, link))).rate;
      const double pair = conferencing_rate(make_network(2, link)).rate + fault("full-house-identity");
      rep.checks.push_back({"full-house-identity", "N=" + std::to_string(n) + " mu=" + format_number(mu),
                            std::abs(ss - pair), 1e-12});
    }
  }

  const auto shots = shot_count(o, 1e6);
  if (shots < 1000) throw UsageError("verify needs --shots >= 1000");
  const auto mc_cfg = make_network(3, link_params(20.0, 0.8, 0.01));
  auto st = verify_conditional_cm(mc_cfg, shots, o.seed);
  if (injected("mc-conditional-cov")) {
    Matrix target = st.analytic_cov;
    target(0, 0) *= 1.0 + 10.0 * relative_tolerance(shots);
    st = compare_covariances(st.empirical_cov, target, st.shots);
  }
  const std::string mc_lab = "N=3 mu=20 eta=0.8 nbar=0.01 shots=" + std::to_string(shots);
  rep.checks.push_back({"mc-conditional-cov", mc_lab + " fraction outside 5 SE",
                        1.0 - st.fraction_within_5se, 0.01});
  rep.checks.push_back({"mc-conditional-cov", mc_lab + " max relative deviation", st.max_rel_dev,
                        relative_tolerance(shots)});

  const auto mi_cfg = make_network(2, link_params(20.0, 0.9, 0.0));
  const auto mi = estimate_pair_mi(mi_cfg, shots, o.seed + 1);
  double analytic = conferencing_mi(mi_cfg);
  if (injected("mc-pair-mi")) analytic += 10.0 * mi.standard_error;
  rep.checks.push_back({"mc-pair-mi", "N=2 mu=20 eta=0.9 nbar=0 in standard errors",
                        std::abs(mi.bits - analytic) / mi.standard_error, 3.0});
  return rep;
}

inline Table verify_table(const VerifyReport& rep) {
  Table t;
  t.command = "verify";
  t.units = "value is the observed discrepancy; pass iff value <= threshold";
  t.columns = {"invariant", "case", "value", "threshold", "pass"};
  for (const auto& c : rep.checks) {
    t.rows.push_back({c.invariant, c.case_label, c.value, c.threshold, std::string(c.pass() ? "true" : "false")});
  }
  return t;
}

inline void print_verify_summary(const VerifyReport& rep, std::ostream& os) {
  for (const auto& name : verify_invariants()) {
    int total = 0, failed = 0;
    double worst = 0.0;
    std::string worst_case;
    for (const auto& c : rep.checks) {
      if (c.invariant != name) continue;
      ++total;
      if (!c.pass()) {
        ++failed;
        if (worst_case.empty()) worst_case = c.case_label;
      }
      worst = std::max(worst, c.value / c.threshold);
    }
    os << (failed ? "FAIL " : "PASS ") << name << ": " << total - failed << "/" << total
       << " checks, worst value/threshold " << format_number(worst);
    if (failed) os << ", first failure " << worst_case;
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Entry point

inline void add_shared_options(CLI::App& app, Options& o) {
  app.add_option("--protocol", o.protocol,
                 "conference | secret-sharing | squeezed-conference | squeezed-secret-sharing")
      ->capture_default_str();
  app.add_option("--n", o.n, "number of users (comma-separated list)")->delimiter(',');
  app.add_option("--split", o.split, "secret-sharing ensembles: A,B | full | dummy1 | dummy2")
      ->capture_default_str();
  app.add_option("--nbar", o.nbar, "thermal photons per link (list)")->delimiter(',')->capture_default_str();
  app.add_option("--distance", o.distance, "fiber distance per link in km (list)")->delimiter(',');
  app.add_option("--distance-grid", o.distance_grid, "distance grid start:stop:step in km");
  app.add_option("--attenuation", o.attenuation, "fiber loss in dB/km")->capture_default_str();
  app.add_option("--mu", o.mu, "fix the modulation instead of optimizing it");
  app.add_option("--xi", o.xi, "reconciliation efficiency")->capture_default_str();
  app.add_option("--bits", o.bits, "discretization bits per quadrature")->capture_default_str();
  app.add_option("--delta-s", o.delta_s, "smoothing error")->capture_default_str();
  app.add_option("--delta-ec", o.delta_ec, "error-correction error")->capture_default_str();
  app.add_option("--delta-pe", o.delta_pe, "parameter-estimation error")->capture_default_str();
  app.add_option("--p", o.p, "success probability of error correction")->capture_default_str();
  app.add_option("--block-size", o.block_size, "finite-size block sizes (list)")->delimiter(',');
  app.add_option("--pe-eta-offset", o.pe_eta_offset, "worst-case reduction of eta")->capture_default_str();
  app.add_option("--pe-nbar-offset", o.pe_nbar_offset, "worst-case increase of nbar")->capture_default_str();
  app.add_option("--aep-log", o.aep_log, "logarithm base inside the AEP term: 2 | e")->capture_default_str();
  app.add_option("--shots", o.shots, "Monte Carlo shots");
  app.add_option("--seed", o.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--format", o.format, "csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "output file (default: standard output)");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"netkit: key rates of continuous-variable star networks", "netkit"};
  Options o;
  add_shared_options(app, o);
  app.set_config("--config", "", "flat key=value file; flags override it");
  app.require_subcommand(1, 1);

  auto* rate = app.add_subcommand("rate", "key rate per (N, nbar, distance)");
  rate->add_flag("--finite-size", o.finite_size, "add finite-size columns for --block-size");
  auto* maxd = app.add_subcommand("max-distance", "largest distance with a positive rate per N");
  auto* finite = app.add_subcommand("finite-size", "finite-size rate against block size");
  auto* verify = app.add_subcommand("verify", "oracle and Monte Carlo invariant checks");
  verify->add_option("--inject-fault", o.inject_fault, "test mode: perturb the named invariant");
  auto* mc = app.add_subcommand("mc-sample", "per-shot Monte Carlo outcomes");
  mc->add_flag("--raw", o.mc_raw, "omit the heterodyne vacuum noise on beta");
  for (auto* sub : {rate, maxd, finite, verify, mc}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "netkit: " << e.what() << '\n' << "run 'netkit --help' for usage\n";
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  auto open_out = [&] {
    if (o.out.empty()) return;
    file.open(o.out);
    if (!file) throw UsageError("cannot open output file '" + o.out + "'");
    sink = &file;
  };

  try {
    if (*verify) {
      const auto rep = run_verify(o);
      print_verify_summary(rep, out);
      if (!o.out.empty()) {
        open_out();
        write_table(verify_table(rep), o.format, *sink);
      }
      out << (rep.all_pass() ? "verify: all invariants hold\n" : "verify: FAILED\n");
      return rep.all_pass() ? kExitOk : kExitFailure;
    }
    Table t;
    if (*rate) t = cmd_rate(o);
    if (*maxd) t = cmd_max_distance(o);
    if (*finite) t = cmd_finite_size(o);
    if (*mc) t = cmd_mc_sample(o);
    open_out();
    write_table(t, o.format, *sink);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "netkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SplitError& e) {
    err << "netkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "netkit: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace netkit::cli
