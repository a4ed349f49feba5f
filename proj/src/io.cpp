#include "su2/io.hpp"

#include "su2/errors.hpp"
#include "su2/format.hpp"
#include "su2/half_index.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <ostream>

namespace su2 {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing key '") + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) invalid(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) invalid(what + " must be a number");
  return v.get<double>();
}

void check_band_limit(int two_L, const std::string& what) {
  if (two_L < 0) invalid(what + " must be nonnegative");
  if (two_L > kDefaultBandLimitCap) {
    throw Error(ErrorCode::BandLimitExceeded,
                what + " = " + std::to_string(two_L) + " exceeds cap " + std::to_string(kDefaultBandLimitCap));
  }
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd real_matrix(const Json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) invalid(what + " must have " + std::to_string(dim) + " rows");
  Eigen::MatrixXd out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim) invalid(what + " rows must have " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) out(r, c) = number(j[r][c], what);
  }
  return out;
}

Json moments_json(const Moments& m) {
  return {{"second", complex_pair(m.second)}, {"pseudo", complex_pair(m.pseudo)}};
}

GeneratorConfig::Variant parse_variant(const std::string& name) {
  using V = GeneratorConfig::Variant;
  if (name == "gaussian_bi") return V::GaussianBi;
  if (name == "gaussian_left") return V::GaussianLeft;
  if (name == "rotated") return V::Rotated;
  if (name == "spin_measure") return V::SpinMeasure;
  invalid("unknown variant '" + name + "'");
}

}  // namespace

Json coefficients_to_json(const SpectralCoefficients& coeffs) {
  Json blocks = Json::array();
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell)
    blocks.push_back({{"two_ell", two_ell}, {"rows", matrix_json(coeffs.block(two_ell))}});
  return {{"band_limit_doubled", coeffs.band_limit()}, {"blocks", blocks}};
}

SpectralCoefficients coefficients_from_json(const Json& j) {
  const int two_L = int_field(j, "band_limit_doubled");
  check_band_limit(two_L, "band_limit_doubled");
  SpectralCoefficients out(two_L);
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_array()) invalid("'blocks' must be an array");
  for (const Json& b : blocks) {
    const int two_ell = int_field(b, "two_ell");
    if (two_ell < 0 || two_ell > two_L) invalid("block two_ell = " + std::to_string(two_ell) + " outside the band limit");
    const Json& rows = field(b, "rows");
    const int dim = two_ell + 1;
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) invalid("block " + std::to_string(two_ell) + " has the wrong row count");
    for (int r = 0; r < dim; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != dim) invalid("block " + std::to_string(two_ell) + " has a short row");
      for (int c = 0; c < dim; ++c) {
        const Json& z = rows[r][c];
        if (!z.is_array() || z.size() != 2) invalid("coefficients are [re, im] pairs");
        out.block(two_ell)(r, c) = {number(z[0], "re"), number(z[1], "im")};
      }
    }
  }
  return out;
}

void write_coefficients_csv(const SpectralCoefficients& coeffs, std::ostream& out) {
  out << "two_ell,two_m,two_s,re,im\n";
  for (int two_ell = 0; two_ell <= coeffs.band_limit(); ++two_ell) {
    const auto& b = coeffs.block(two_ell);
    for (int r = 0; r <= two_ell; ++r)
      for (int c = 0; c <= two_ell; ++c)
        out << two_ell << ',' << order_at(two_ell, r) << ',' << order_at(two_ell, c) << ',' << format_double(b(r, c).real()) << ','
            << format_double(b(r, c).imag()) << '\n';
  }
}

Json wigner_table_json(const WignerMatrix& d) {
  const int n = d.two_ell();
  Json entries = Json::array();
  for (int r = 0; r <= n; ++r)
    for (int c = 0; c <= n; ++c) {
      const Complex z = d.matrix()(r, c);
      entries.push_back({{"two_m", order_at(n, r)}, {"two_s", order_at(n, c)}, {"re", z.real()}, {"im", z.imag()}});
    }
  return {{"two_ell", n}, {"entries", entries}};
}

void write_wigner_table_csv(const WignerMatrix& d, std::ostream& out) {
  const int n = d.two_ell();
  out << "two_ell,two_m,two_s,re,im\n";
  for (int r = 0; r <= n; ++r)
    for (int c = 0; c <= n; ++c) {
      const Complex z = d.matrix()(r, c);
      out << n << ',' << order_at(n, r) << ',' << order_at(n, c) << ',' << format_double(z.real()) << ',' << format_double(z.imag())
          << '\n';
    }
}

Json grid_to_json(const QuadratureGrid& grid) {
  Json nodes = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const EulerAngles& e = grid.nodes()[k];
    nodes.push_back({{"phi", e.phi}, {"theta", e.theta}, {"psi", e.psi}, {"weight", grid.weights()[k]}});
  }
  return {{"band_limit_doubled", grid.band_limit()}, {"gate_defect", grid.gate_defect()}, {"nodes", nodes}};
}

RunSpec run_spec_from_json(const Json& j) {
  if (!j.is_object()) invalid("spec must be a JSON object");
  const Json& v = field(j, "variant");
  if (!v.is_string()) invalid("'variant' must be a string");
  RunSpec spec;
  GeneratorConfig& g = spec.generator;
  g.variant = parse_variant(v.get<std::string>());
  using V = GeneratorConfig::Variant;
  switch (g.variant) {
    case V::GaussianBi: {
      g.covariance.variant = CovarianceSpec::Variant::BiInvariant;
      g.covariance.band_limit = int_field(j, "band_limit_doubled");
      check_band_limit(g.covariance.band_limit, "band_limit_doubled");
      const Json& s = field(j, "spectrum");
      if (!s.is_array()) invalid("'spectrum' must be an array");
      for (const Json& x : s) g.covariance.spectrum.push_back(number(x, "spectrum entry"));
      break;
    }
    case V::GaussianLeft: {
      g.covariance.variant = CovarianceSpec::Variant::LeftInvariant;
      g.covariance.band_limit = int_field(j, "band_limit_doubled");
      check_band_limit(g.covariance.band_limit, "band_limit_doubled");
      const Json& cov = field(j, "covariance");
      if (!cov.is_array()) invalid("'covariance' must be an array");
      g.covariance.covariance.assign(g.covariance.band_limit + 1, Eigen::MatrixXcd());
      std::vector<bool> seen(g.covariance.band_limit + 1, false);
      for (const Json& k : cov) {
        const int two_ell = int_field(k, "two_ell");
        if (two_ell < 0 || two_ell > g.covariance.band_limit) invalid("covariance two_ell outside the band limit");
        if (seen[two_ell]) invalid("duplicate covariance block " + std::to_string(two_ell));
        seen[two_ell] = true;
        const Eigen::MatrixXd re = real_matrix(field(k, "re"), two_ell + 1, "covariance re");
        Eigen::MatrixXd im = Eigen::MatrixXd::Zero(two_ell + 1, two_ell + 1);
        if (k.contains("im")) im = real_matrix(k.at("im"), two_ell + 1, "covariance im");
        g.covariance.covariance[two_ell] = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
      }
      for (int two_ell = 0; two_ell <= g.covariance.band_limit; ++two_ell)
        if (!seen[two_ell]) g.covariance.covariance[two_ell] = Eigen::MatrixXcd::Zero(two_ell + 1, two_ell + 1);
      break;
    }
    case V::Rotated: {
      g.templ = coefficients_from_json(field(j, "template"));
      const Json& side = field(j, "side");
      if (!side.is_string()) invalid("'side' must be a string");
      g.side = parse_rotation_side(side.get<std::string>());
      break;
    }
    case V::SpinMeasure: {
      const Json& mu = field(j, "mu");
      g.mu.two_ell = int_field(mu, "two_ell");
      check_band_limit(g.mu.two_ell, "mu.two_ell");
      const Json& masses = field(mu, "masses");
      if (!masses.is_array()) invalid("'masses' must be an array");
      for (const Json& x : masses) g.mu.masses.push_back(number(x, "mass"));
      break;
    }
  }
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) invalid("'seed' must be a nonnegative integer");
    spec.seed = s.get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    const Json& s = j.at("samples");
    if (!s.is_number_integer() || s.get<long long>() <= 0) invalid("'samples' must be a positive integer");
    spec.samples = s.get<long>();
  }
  g.validate();
  return spec;
}

RunSpec load_run_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read spec file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid("malformed JSON in '" + path + "': " + e.what());
  }
  return run_spec_from_json(j);
}

Json report_to_json(const CorrelationReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"label", r.label},
                    {"estimate", moments_json(r.estimate)},
                    {"prediction", moments_json(r.prediction)},
                    {"stderr_second", r.stderr_second},
                    {"stderr_pseudo", r.stderr_pseudo},
                    {"pass_second", r.pass_second},
                    {"pass_pseudo", r.pass_pseudo}});
  }
  return {{"samples", report.samples}, {"all_pass", report.all_pass()}, {"rows", rows}};
}

void write_report_csv(const CorrelationReport& report, std::ostream& out) {
  out << "label,est_second_re,est_second_im,pred_second_re,pred_second_im,stderr_second,pass_second,"
         "est_pseudo_re,est_pseudo_im,pred_pseudo_re,pred_pseudo_im,stderr_pseudo,pass_pseudo\n";
  for (const auto& r : report.rows) {
    out << '"' << r.label << '"' << ',' << format_double(r.estimate.second.real()) << ',' << format_double(r.estimate.second.imag())
        << ',' << format_double(r.prediction.second.real()) << ',' << format_double(r.prediction.second.imag()) << ','
        << format_double(r.stderr_second) << ',' << (r.pass_second ? "true" : "false") << ','
        << format_double(r.estimate.pseudo.real()) << ',' << format_double(r.estimate.pseudo.imag()) << ','
        << format_double(r.prediction.pseudo.real()) << ',' << format_double(r.prediction.pseudo.imag()) << ','
        << format_double(r.stderr_pseudo) << ',' << (r.pass_pseudo ? "true" : "false") << '\n';
  }
}

Json spin_measures_to_json(const SpinMeasureSet& set) {
  Json total = Json::array(), left = Json::array(), right = Json::array(), bi = Json::array();
  for (const auto& [k, v] : set.total)
    total.push_back({{"two_ell", std::get<0>(k)}, {"two_m", std::get<1>(k)}, {"two_s", std::get<2>(k)}, {"value", v}});
  for (const auto& [k, v] : set.left) left.push_back({{"two_m", k}, {"value", v}});
  for (const auto& [k, v] : set.right) right.push_back({{"two_s", k}, {"value", v}});
  for (const auto& [k, v] : set.bi) bi.push_back({{"two_m", k.first}, {"two_s", k.second}, {"value", v}});
  return {{"total", total}, {"left", left}, {"right", right}, {"bi", bi}};
}

Json spin_estimate_to_json(const SpinMeasureEstimate& estimate) {
  return {{"samples", estimate.samples},
          {"value", spin_measures_to_json(estimate.value)},
          {"stderr", spin_measures_to_json(estimate.standard_error)}};
}

void write_spin_estimate_csv(const SpinMeasureEstimate& estimate, const std::string& mode, std::ostream& out) {
  auto line = [&](const char* kind, const std::string& l, const std::string& m, const std::string& s, double v, double e) {
    out << mode << ',' << kind << ',' << l << ',' << m << ',' << s << ',' << format_double(v) << ',' << format_double(e) << '\n';
  };
  const auto& se = estimate.standard_error;
  for (const auto& [k, v] : estimate.value.total) {
    const auto it = se.total.find(k);
    line("total", std::to_string(std::get<0>(k)), std::to_string(std::get<1>(k)), std::to_string(std::get<2>(k)), v,
         it == se.total.end() ? 0.0 : it->second);
  }
  for (const auto& [k, v] : estimate.value.left) {
    const auto it = se.left.find(k);
    line("left", "", std::to_string(k), "", v, it == se.left.end() ? 0.0 : it->second);
  }
  for (const auto& [k, v] : estimate.value.right) {
    const auto it = se.right.find(k);
    line("right", "", "", std::to_string(k), v, it == se.right.end() ? 0.0 : it->second);
  }
  for (const auto& [k, v] : estimate.value.bi) {
    const auto it = se.bi.find(k);
    line("bi", "", std::to_string(k.first), std::to_string(k.second), v, it == se.bi.end() ? 0.0 : it->second);
  }
}

double parse_angle(const std::string& token) {
  auto decimal = [&](const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
  };
  double value = 0.0;
  const std::string body = token.size() > 1 && token[0] == '+' ? token.substr(1) : token;
  if (decimal(body, value)) return value;

  static const std::regex symbolic(R"(^([+-]?)([0-9]*\.?[0-9]*)\*?(?:pi|\xCF\x80)(?:/([0-9]*\.?[0-9]+))?$)");
  std::smatch m;
  if (!std::regex_match(token, m, symbolic)) throw Error(ErrorCode::ParseError, "malformed angle '" + token + "'");
  double numerator = 1.0;
  if (m[2].length() > 0 && !decimal(m[2].str(), numerator)) throw Error(ErrorCode::ParseError, "malformed angle '" + token + "'");
  double denominator = 1.0;
  if (m[3].matched && (!decimal(m[3].str(), denominator) || denominator == 0.0))
    throw Error(ErrorCode::ParseError, "malformed angle '" + token + "'");
  const double sign = m[1].str() == "-" ? -1.0 : 1.0;
  return sign * numerator * std::numbers::pi / denominator;
}

Json rows_to_json(const std::vector<CheckRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back({{"name", r.name}, {"metric", r.metric}, {"threshold", r.threshold}, {"pass", r.pass}});
  return {{"all_pass", all_pass(rows)}, {"checks", out}};
}

}  // namespace su2
