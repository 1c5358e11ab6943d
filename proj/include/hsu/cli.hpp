#pragma once

// Command implementations for the `hsu` executable. Each returns the process exit code and
// writes results to `out`, diagnostics to `err`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsu/coefficient_io.hpp"
#include "hsu/errors.hpp"
#include "hsu/poisson_directional.hpp"
#include "hsu/uncertainty.hpp"
#include "hsu/verify.hpp"

namespace hsu::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadInput = 2,
  kUndefined = 3,
  kConvergence = 4,
  kIoFailure = 5,
};

inline void print_error(std::ostream& err, const std::string& what) {
  std::string line = what;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "ERROR: " << line << '\n';
}

/// Runs body and maps library exceptions to exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    print_error(err, e.what());
    return kIoFailure;
  } catch (const UndefinedQuantityError& e) {
    print_error(err, e.what());
    return kUndefined;
  } catch (const ConvergenceError& e) {
    print_error(err, e.what());
    return kConvergence;
  } catch (const InputError& e) {
    print_error(err, e.what());
    return kBadInput;
  } catch (const DomainError& e) {
    print_error(err, e.what());
    return kBadInput;
  } catch (const ResourceError& e) {
    print_error(err, e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    print_error(err, e.what());
    return kBadInput;
  }
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json report_json(const UncertaintyReport& r) {
  return {{"xi_O", r.xi},   {"norm_xi", r.norm_xi}, {"var_S", r.var_s}, {"var_M", r.var_m},
          {"U", r.u},       {"bound", r.bound},     {"bound_ok", r.bound_ok}};
}

inline int cmd_report(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto f = read_coefficients_file(path);
    out << report_json(uncertainty_report(f)).dump(2) << '\n';
    return kOk;
  });
}

enum class PoissonMode { Exact, Asymptotic, Both };

inline double require_half_integer_lambda(double lambda) {
  if (!is_half_integer(lambda) || lambda < 0.5) throw InputError("lambda must be a half-integer >= 1/2");
  return lambda;
}

inline double require_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho must be positive and finite");
  return rho;
}

inline double rel_gap(double exact, double approx) { return std::fabs(exact - approx) / std::fabs(exact); }

inline nlohmann::json poisson_json(double lambda, double rho, PoissonMode mode) {
  require_half_integer_lambda(lambda);
  require_rho(rho);
  if (lambda < 1.0) throw InputError("the directional wavelet needs lambda >= 1 (n >= 3)");
  if (mode != PoissonMode::Exact && lambda < 1.5) throw InputError("asymptotics require λ ≥ 3/2");
  const WaveletParams w{lambda, rho};
  nlohmann::json j;
  j["lambda"] = lambda;
  j["n"] = static_cast<int>(std::lround(2.0 * lambda)) + 1;
  j["rho"] = rho;
  UncertaintyReport ex;
  if (mode != PoissonMode::Asymptotic) {
    const std::int64_t L = g_truncation_degree(w);
    ex = uncertainty_G(w, L);
    j["exact"] = {{"degree_cutoff", L}, {"xi_O1", ex.xi[0]}, {"var_S", ex.var_s}, {"var_M", ex.var_m},
                  {"U", ex.u},          {"bound", ex.bound}, {"bound_ok", ex.bound_ok}};
  }
  double as_s = 0, as_m = 0, as_u = 0;
  if (mode != PoissonMode::Exact) {
    as_s = var_s_G_asymptotic(lambda).eval(rho);
    as_m = var_m_G_asymptotic(lambda).eval(rho);
    as_u = u_G_asymptotic(lambda).eval(rho);
    j["asymptotic"] = {{"xi_O1", xi_G_asymptotic(lambda).eval(rho)},
                       {"var_S", as_s},
                       {"var_M", as_m},
                       {"U", as_u}};
  }
  if (lambda >= 1.5) {
    const double ul = u_limit(lambda);
    j["u_limit"] = ul;
    if (mode != PoissonMode::Asymptotic) j["u_limit_gap"] = rel_gap(ex.u, ul);
  }
  if (mode == PoissonMode::Both) {
    j["relative_gaps"] = {{"var_S", rel_gap(ex.var_s, as_s)},
                          {"var_M", rel_gap(ex.var_m, as_m)},
                          {"U", rel_gap(ex.u, as_u)}};
  }
  return j;
}

inline int cmd_poisson(double lambda, double rho, PoissonMode mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << poisson_json(lambda, rho, mode).dump(2) << '\n';
    return kOk;
  });
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);) parts.push_back(t);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

inline double parse_number(const std::string& t) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw InputError("cannot parse number \"" + t + "\"");
  }
  if (pos != t.size() || !std::isfinite(v)) throw InputError("cannot parse number \"" + t + "\"");
  return v;
}

inline std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_number(t));
  if (out.empty()) throw InputError("empty number list");
  return out;
}

/// "a,b,c" or an arithmetic range "start:stop:step".
inline std::vector<double> parse_lambda_list(const std::string& s) {
  if (s.find(':') == std::string::npos) return parse_number_list(s);
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw InputError("lambda range must be start:stop:step");
  const double a = parse_number(parts[0]), b = parse_number(parts[1]), h = parse_number(parts[2]);
  if (!(h > 0.0) || b < a) throw InputError("lambda range needs step > 0 and stop >= start");
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / h + 1e-9)) + 1;
  if (count > 100000) throw InputError("lambda range has too many points");
  std::vector<double> out;
  for (std::int64_t i = 0; i < count; ++i) out.push_back(a + h * static_cast<double>(i));
  return out;
}

/// "a,b,c" or a geometric range "start:stop:count".
inline std::vector<double> parse_rho_list(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') == std::string::npos) {
    out = parse_number_list(s);
  } else {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InputError("rho range must be start:stop:count");
    const double a = parse_number(parts[0]), b = parse_number(parts[1]), c = parse_number(parts[2]);
    if (c < 1 || c != std::floor(c) || c > 100000) throw InputError("rho range count must be a positive integer");
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("rho must be positive and finite");
    const auto count = static_cast<int>(c);
    for (int i = 0; i < count; ++i) {
      out.push_back(count == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (count - 1)));
    }
  }
  for (double r : out) require_rho(r);
  return out;
}

struct SweepSpec {
  std::vector<double> lambdas;
  std::vector<double> rhos;  // unused in ratio mode
  bool ratio = false;
  std::string output;
  std::vector<std::string> columns;  // empty: all
};

inline const std::vector<std::string>& sweep_columns(bool ratio) {
  static const std::vector<std::string> plain{"lambda", "rho", "var_S", "var_M", "U"};
  static const std::vector<std::string> full{"lambda", "rho", "var_S", "var_M", "U", "u_limit", "zonal_min", "ratio"};
  return ratio ? full : plain;
}

/// CSV text for a sweep. In ratio mode rho is "limit", var_S and var_M are the rho -> 0 limits
/// of var_S/rho^2 and rho^2 var_M, and U is the extrapolated limit of U(G).
inline std::string sweep_csv(const SweepSpec& spec) {
  if (spec.lambdas.empty()) throw InputError("sweep needs at least one lambda");
  const auto& all = sweep_columns(spec.ratio);
  std::vector<std::string> cols = spec.columns.empty() ? all : spec.columns;
  for (const auto& c : cols) {
    if (std::find(all.begin(), all.end(), c) == all.end()) throw InputError("unknown column \"" + c + "\"");
  }
  for (double l : spec.lambdas) {
    require_half_integer_lambda(l);
    if (spec.ratio && l < 2.0) throw InputError("ratio sweep needs lambda >= 2");
    if (!spec.ratio && l < 1.0) throw InputError("the directional wavelet needs lambda >= 1 (n >= 3)");
  }
  using Row = std::map<std::string, std::string>;
  std::vector<Row> rows;
  if (spec.ratio) {
    const auto rc = ratio_curve(spec.lambdas);
    rows.resize(rc.size());
    parallel_for(rc.size(), [&](std::size_t i) {
      const auto lim = g_limits(rc[i].lambda);
      rows[i] = {{"lambda", format_double(rc[i].lambda)}, {"rho", "limit"},
                 {"var_S", format_double(lim.var_s_over_rho2)}, {"var_M", format_double(lim.rho2_var_m)},
                 {"U", format_double(lim.u)},           {"u_limit", format_double(rc[i].u_limit)},
                 {"zonal_min", format_double(rc[i].zonal_min)}, {"ratio", format_double(rc[i].ratio)}};
    });
  } else {
    if (spec.rhos.empty()) throw InputError("sweep needs at least one rho");
    rows.resize(spec.lambdas.size() * spec.rhos.size());
    parallel_for(rows.size(), [&](std::size_t i) {
      const double l = spec.lambdas[i / spec.rhos.size()];
      const double r = spec.rhos[i % spec.rhos.size()];
      const auto rep = uncertainty_G({l, r}, g_truncation_degree({l, r}));
      rows[i] = {{"lambda", format_double(l)}, {"rho", format_double(r)}, {"var_S", format_double(rep.var_s)},
                 {"var_M", format_double(rep.var_m)}, {"U", format_double(rep.u)}};
    });
  }
  std::string csv;
  for (std::size_t j = 0; j < cols.size(); ++j) csv += (j ? "," : "") + cols[j];
  csv += '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < cols.size(); ++j) csv += (j ? "," : "") + row.at(cols[j]);
    csv += '\n';
  }
  return csv;
}

inline int cmd_sweep(const SweepSpec& spec, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string csv = sweep_csv(spec);
    std::ofstream f(spec.output, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file " + spec.output);
    f << csv;
    f.flush();
    if (!f) throw IoError("failed writing output file " + spec.output);
    out << "wrote " << (std::count(csv.begin(), csv.end(), '\n') - 1) << " rows to " << spec.output << '\n';
    return kOk;
  });
}

inline int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::string first_failure;
    for (const auto& check : verification_checks()) {
      const CheckResult r = check(opts);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-4s  %-22s  ", r.passed ? "PASS" : "FAIL", r.name.c_str());
      out << buf << r.detail << '\n';
      out.flush();
      if (!r.passed && first_failure.empty()) first_failure = r.name;
    }
    if (!first_failure.empty()) {
      print_error(err, "verification failed: " + first_failure);
      return kVerifyFailed;
    }
    return kOk;
  });
}

/// Quadrature cap: the flag if given, then UNCERT_MAX_NODES, then the default.
inline std::int64_t resolve_max_nodes(std::int64_t flag_value) {
  if (flag_value > 0) return flag_value;
  return max_nodes_from_env();
}

}  // namespace hsu::cli
