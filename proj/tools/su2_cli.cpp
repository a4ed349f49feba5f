#include "su2/errors.hpp"
#include "su2/io.hpp"
#include "su2/random_fields.hpp"
#include "su2/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace su2;

enum Exit { kOk = 0, kVerifyFailed = 1, kParse = 2, kBandLimit = 3, kInvalidSpec = 4 };

struct Options {
  int two_ell = -1;
  std::vector<std::string> euler;
  std::vector<double> alpha_beta;
  int band_limit = 4;
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::string spec;
  std::string out;
  std::string format = "csv";
  int threads = 1;
  std::vector<std::string> tol_overrides;
};

// A parse failure attributed to a flag.
[[noreturn]] void flag_error(const std::string& flag, const std::string& what) {
  throw Error(ErrorCode::ParseError, flag + ": " + what);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) flag_error("--out", "cannot open '" + o.out + "' for writing");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SU2Element element_from(const Options& o) {
  if (!o.euler.empty() && !o.alpha_beta.empty()) flag_error("--euler", "give either --euler or --alpha-beta, not both");
  if (!o.euler.empty()) {
    EulerAngles e;
    double* slots[3] = {&e.phi, &e.theta, &e.psi};
    for (int i = 0; i < 3; ++i) {
      try {
        *slots[i] = parse_angle(o.euler[i]);
      } catch (const Error& err) {
        flag_error("--euler", err.what());
      }
    }
    return su2_from_euler(e);
  }
  if (!o.alpha_beta.empty()) {
    try {
      return SU2Element::make({o.alpha_beta[0], o.alpha_beta[1]}, {o.alpha_beta[2], o.alpha_beta[3]});
    } catch (const Error& err) {
      flag_error("--alpha-beta", err.what());
    }
  }
  flag_error("--euler", "an element is required (--euler PHI THETA PSI or --alpha-beta RE IM RE IM)");
}

std::map<std::string, double> overrides_from(const Options& o) {
  std::map<std::string, double> out;
  for (const auto& kv : o.tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) flag_error("--tol-override", "expected key=value, got '" + kv + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      flag_error("--tol-override", "malformed value in '" + kv + "'");
    }
    out[kv.substr(0, eq)] = value;
  }
  return out;
}

RunSpec spec_from(const Options& o) {
  if (o.spec.empty()) flag_error("--spec", "a generator spec file is required");
  return load_run_spec(o.spec);
}

McOptions mc_from(const Options& o, const RunSpec& spec, long default_samples) {
  McOptions mc;
  mc.seed = o.seed.value_or(spec.seed.value_or(1));
  mc.samples = o.samples.value_or(spec.samples.value_or(default_samples));
  mc.threads = o.threads;
  return mc;
}

int cmd_wigner_table(const Options& o) {
  if (o.two_ell < 0) flag_error("--two-ell", "a nonnegative doubled degree is required");
  const WignerMatrix d = wigner_matrix(o.two_ell, element_from(o));
  if (o.format == "json") {
    emit(o, dump(wigner_table_json(d)));
  } else {
    std::ostringstream s;
    write_wigner_table_csv(d, s);
    emit(o, s.str());
  }
  return kOk;
}

int cmd_grid(const Options& o) {
  const QuadratureGrid grid = build_grid(o.band_limit);
  if (o.format == "json") {
    emit(o, dump(grid_to_json(grid)));
  } else {
    std::ostringstream s;
    write_grid_csv(grid, s);
    emit(o, s.str());
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  VerifyConfig config;
  config.band_limit = o.band_limit;
  config.seed = o.seed.value_or(1);
  config.tolerance_overrides = overrides_from(o);
  const std::vector<std::string> names = {"unitarity",      "homomorphism",  "symmetry",        "little_d_realness",
                                          "harmonicity_fd", "grid_gate",     "grid_total_weight", "laplacian_exact",
                                          "laplacian_fd",   "haar_moments",  "schur_moments"};
  if (const auto it = config.tolerance_overrides.find("all"); it != config.tolerance_overrides.end()) {
    const double value = it->second;
    config.tolerance_overrides.erase(it);
    for (const auto& n : names) config.tolerance_overrides.emplace(n, value);
  }
  for (const auto& [key, value] : config.tolerance_overrides)
    if (std::find(names.begin(), names.end(), key) == names.end()) flag_error("--tol-override", "unknown check '" + key + "'");

  const auto rows = run_verify(config);
  if (o.format == "json") {
    emit(o, dump(rows_to_json(rows)));
  } else {
    std::ostringstream s;
    write_rows_csv(rows, s);
    emit(o, s.str());
  }
  for (const auto& r : rows)
    if (!r.pass) std::cerr << "FAILED " << r.name << ": metric " << r.metric << " > threshold " << r.threshold << "\n";
  return all_pass(rows) ? kOk : kVerifyFailed;
}

int cmd_field_sample(const Options& o) {
  const RunSpec spec = spec_from(o);
  const CoefficientGenerator gen = make_generator(spec.generator);
  const std::uint64_t seed = o.seed.value_or(spec.seed.value_or(1));
  const long n = o.samples.value_or(spec.samples.value_or(1));
  if (n < 1) flag_error("--samples", "must be at least 1");
  Rng rng = make_stream(seed, 0);
  if (o.format == "json") {
    Json fields = Json::array();
    for (long i = 0; i < n; ++i) fields.push_back(coefficients_to_json(gen(rng)));
    emit(o, dump({{"variant", to_string(spec.generator.variant)}, {"seed", seed}, {"samples", fields}}));
  } else {
    std::ostringstream s;
    s << "sample,two_ell,two_m,two_s,re,im\n";
    for (long i = 0; i < n; ++i) {
      std::ostringstream one;
      write_coefficients_csv(gen(rng), one);
      std::istringstream lines(one.str());
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) s << i << ',' << line << '\n';
    }
    emit(o, s.str());
  }
  return kOk;
}

int cmd_mc_correlations(const Options& o) {
  const RunSpec spec = spec_from(o);
  const int max_two_ell = o.two_ell >= 0 ? std::min(o.two_ell, spec.generator.band_limit()) : spec.generator.band_limit();
  const auto report =
      estimate_correlations(make_generator(spec.generator), all_targets(spec.generator, max_two_ell), mc_from(o, spec, 100000));
  if (o.format == "json") {
    emit(o, dump(report_to_json(report)));
  } else {
    std::ostringstream s;
    write_report_csv(report, s);
    emit(o, s.str());
  }
  return report.all_pass() ? kOk : kVerifyFailed;
}

int cmd_spin_spectra(const Options& o) {
  const RunSpec spec = spec_from(o);
  const CoefficientGenerator gen = make_generator(spec.generator);
  const McOptions mc = mc_from(o, spec, 100000);
  const auto weak = estimate_spin_measures(gen, SpinMode::Weak, mc);
  const auto strong = estimate_spin_measures(gen, SpinMode::Strong, mc);
  if (o.format == "json") {
    emit(o, dump({{"weak", spin_estimate_to_json(weak)}, {"strong", spin_estimate_to_json(strong)}}));
  } else {
    std::ostringstream s;
    s << "mode,kind,two_ell,two_m,two_s,value,stderr\n";
    write_spin_estimate_csv(weak, "weak", s);
    write_spin_estimate_csv(strong, "strong", s);
    emit(o, s.str());
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::BandLimitExceeded: return kBandLimit;
    case ErrorCode::InvalidSpec:
    case ErrorCode::NotPSD: return kInvalidSpec;
    default: return kVerifyFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic analysis and random fields on SU(2)"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (stdout if omitted)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "Random seed");
  };
  auto add_mc = [&](CLI::App* sub) {
    add_seed(sub);
    sub->add_option("--spec", o.spec, "Generator spec JSON")->required();
    sub->add_option_function<long>("--samples", [&](const long& v) { o.samples = v; }, "Sample count")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    add_output(sub);
  };

  auto* wigner = app.add_subcommand("wigner-table", "Full D^l matrix at one element");
  wigner->add_option("--two-ell", o.two_ell, "Doubled degree 2l")->required()->check(CLI::NonNegativeNumber);
  wigner->add_option("--euler", o.euler, "Euler angles PHI THETA PSI (radians or multiples of pi)")->expected(3);
  wigner->add_option("--alpha-beta", o.alpha_beta, "RE(alpha) IM(alpha) RE(beta) IM(beta), normalized to unit length")->expected(4);
  add_output(wigner);

  auto* grid = app.add_subcommand("grid", "Quadrature nodes and weights");
  grid->add_option("--band-limit-doubled", o.band_limit, "Doubled band limit 2L")->check(CLI::NonNegativeNumber);
  add_output(grid);

  auto* verify = app.add_subcommand("verify", "Structural self-checks");
  verify->add_option("--band-limit-doubled", o.band_limit, "Doubled band limit 2L")->check(CLI::NonNegativeNumber);
  add_seed(verify);
  verify->add_option("--tol-override", o.tol_overrides, "check=threshold, or all=threshold");
  add_output(verify);

  auto* sample = app.add_subcommand("field-sample", "Sample coefficient sets from a generator");
  add_mc(sample);
  auto* mc = app.add_subcommand("mc-correlations", "Monte Carlo moments against closed forms");
  add_mc(mc);
  mc->add_option("--two-ell", o.two_ell, "Largest doubled degree in the report")->check(CLI::NonNegativeNumber);
  auto* spin = app.add_subcommand("spin-spectra", "Weak and strong spin measures");
  add_mc(spin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (wigner->parsed()) return cmd_wigner_table(o);
    if (grid->parsed()) return cmd_grid(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sample->parsed()) return cmd_field_sample(o);
    if (mc->parsed()) return cmd_mc_correlations(o);
    if (spin->parsed()) return cmd_spin_spectra(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kOk;
}
