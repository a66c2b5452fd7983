// ptlat: spectra, formula verification, metric reports and exceptional points
// for the PT-symmetric tridiagonal lattice family.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification mismatch.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "ptlat/ptlat.hpp"

namespace fs = std::filesystem;
using namespace ptlat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitMismatch = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::size_t coupling_index(const std::string& name) {
  if (name == "lambda") return 1;
  if (name == "mu") return 2;
  if (name == "nu") return 3;
  static const std::regex pd(R"(p([1-9][0-9]*))");
  std::smatch m;
  if (std::regex_match(name, m, pd)) return std::stoul(m[1]);
  throw UsageError("unknown coupling name '" + name + "' (use lambda, mu, nu or pK)");
}

double parse_real(const std::string& s) {
  try {
    const double x = to_float(Rational::parse(s));
    return x;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

struct Link {
  std::size_t target = 0;
  std::size_t source = 0;
  AffineLink map;
};

// "mu=lambda+0.25", "nu=2*lambda-1/3", "mu=lambda".
Link parse_link(const std::string& text) {
  static const std::regex re(R"(\s*(\w+)\s*=\s*(?:([-+]?[0-9./eE]+)\s*\*\s*)?(\w+)\s*(?:([-+])\s*([0-9./eE]+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("cannot parse linkage '" + text + "'");
  Link l;
  l.target = coupling_index(m[1]);
  l.source = coupling_index(m[3]);
  l.map.slope = m[2].matched ? parse_real(m[2]) : 1.0;
  if (m[5].matched) l.map.offset = (m[4] == "-" ? -1.0 : 1.0) * parse_real(m[5]);
  if (l.target == l.source) throw UsageError("linkage '" + text + "' refers to itself");
  return l;
}

struct ModelFlags {
  std::optional<std::size_t> n;
  std::optional<std::size_t> depth;
  std::optional<std::string> lambda, mu, nu;
  std::vector<std::string> links;
  std::vector<std::string> ties;
  double tol_real = kDefaultTolReal;
  std::string out;

  void add_to(CLI::App* app, bool with_n = true) {
    if (with_n) app->add_option("--n", n, "lattice size N")->check(CLI::PositiveNumber);
    app->add_option("--depth", depth, "coupling depth K (inferred from the given couplings when omitted)")->check(CLI::PositiveNumber);
    app->add_option("--lambda", lambda, "first coupling (decimal or p/q)");
    app->add_option("--mu", mu, "second coupling");
    app->add_option("--nu", nu, "third coupling");
    app->add_option("--link", links, "affine linkage, e.g. mu=lambda+0.25");
    app->add_option("--tie", ties, "equality linkage, e.g. mu=lambda");
    app->add_option("--tol-real", tol_real, "imaginary-part tolerance for real eigenvalues")->check(CLI::PositiveNumber);
    app->add_option("--out", out, "output directory (default $PTLAT_OUT_DIR or .)");
  }

  std::vector<Link> all_links() const {
    std::vector<Link> v;
    for (const auto& s : links) v.push_back(parse_link(s));
    for (const auto& s : ties) {
      Link l = parse_link(s);
      if (l.map.slope != 1.0 || l.map.offset != 0.0) throw UsageError("--tie takes a plain equality, got '" + s + "'");
      v.push_back(l);
    }
    return v;
  }

  std::vector<std::pair<std::size_t, std::string>> given_values() const {
    std::vector<std::pair<std::size_t, std::string>> v;
    if (lambda) v.push_back({1, *lambda});
    if (mu) v.push_back({2, *mu});
    if (nu) v.push_back({3, *nu});
    return v;
  }

  std::size_t resolved_depth(std::size_t driver = 1) const {
    std::size_t k = driver;
    for (const auto& [d, s] : given_values()) k = std::max(k, d);
    for (const auto& l : all_links()) k = std::max({k, l.target, l.source});
    if (depth) {
      if (*depth < k) throw UsageError("--depth " + std::to_string(*depth) + " is smaller than the couplings given");
      k = *depth;
    }
    return k;
  }

  std::size_t size() const {
    if (!n) throw UsageError("--n is required");
    return *n;
  }

  /// Path driven by coupling `driver`; other couplings fixed or linked.
  ParameterPath path(std::size_t driver) const {
    const std::size_t k = resolved_depth(driver);
    std::vector<AffineLink> maps(k);
    for (const auto& [d, s] : given_values())
      if (d != driver) maps[d - 1] = {0.0, parse_real(s)};
    for (const auto& l : all_links()) {
      if (l.source != driver) throw UsageError("linkages must refer to the swept coupling");
      maps[l.target - 1] = l.map;
    }
    return ParameterPath(driver, std::move(maps));
  }

  /// Point value: driver coupling from its flag (0 when absent).
  CouplingVector<double> point() const {
    double x = 0.0;
    if (lambda) x = parse_real(*lambda);
    return path(1).at(x);
  }

  fs::path out_dir() const {
    fs::path dir = ".";
    if (const char* env = std::getenv("PTLAT_OUT_DIR"); env && *env) dir = env;
    if (!out.empty()) dir = out;
    fs::create_directories(dir);
    return dir;
  }
};

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << text;
}

void write_json(const fs::path& file, const Json& j) { write_text(file, j.dump(2) + "\n"); }

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(flag + " expects lo:hi");
  const double lo = parse_real(text.substr(0, colon));
  const double hi = parse_real(text.substr(colon + 1));
  if (!(lo < hi)) throw UsageError(flag + " needs lo < hi");
  return {lo, hi};
}

// ---- spectrum ---------------------------------------------------------------

struct SpectrumFlags {
  ModelFlags model;
  std::string sweep;
  bool svg = false;
};

int cmd_spectrum(const SpectrumFlags& f) {
  const std::size_t n = f.model.size();
  SweepTable table;
  std::string title;
  if (!f.sweep.empty()) {
    // name:lo:hi:steps
    std::vector<std::string> parts;
    std::stringstream ss(f.sweep);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw UsageError("--sweep expects name:lo:hi:steps");
    const std::size_t driver = coupling_index(parts[0]);
    const double lo = parse_real(parts[1]), hi = parse_real(parts[2]);
    std::size_t steps = 0;
    try {
      steps = std::stoul(parts[3]);
    } catch (const std::exception&) {
      throw UsageError("--sweep steps must be a positive integer");
    }
    if (!(lo < hi) || steps < 2) throw UsageError("--sweep needs lo < hi and steps >= 2");
    const ParameterPath path = f.model.path(driver);
    table = sweep(n, path, lo, hi, steps, f.model.tol_real);
    title = "N = " + std::to_string(n) + ", real parts vs " + parts[0];
  } else {
    const auto c = f.model.point();
    SweepRow row;
    row.driver = c.depth() >= 1 ? c.param(1) : 0.0;
    row.spectrum = eigenvalues(build_hamiltonian(n, c), f.model.tol_real);
    row.real_count = row.spectrum.real_count();
    table.n = n;
    table.grid = {row.driver};
    table.rows = {row};
  }

  const fs::path dir = f.model.out_dir();
  std::ostringstream csv;
  write_sweep_csv(csv, table);
  write_text(dir / "spectrum.csv", csv.str());
  if (f.svg) {
    std::ostringstream svg;
    write_sweep_svg(svg, table, title);
    write_text(dir / "spectrum.svg", svg.str());
  }

  std::size_t min_real = n, max_real = 0;
  for (const auto& r : table.rows) {
    min_real = std::min(min_real, r.real_count);
    max_real = std::max(max_real, r.real_count);
  }
  std::cout << "spectrum: " << table.rows.size() << " point(s), N = " << n << ", real count " << min_real << ".." << max_real << "\n"
            << "wrote " << (dir / "spectrum.csv").string() << (f.svg ? " and spectrum.svg" : "") << "\n";
  return kExitOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyFlags {
  ModelFlags model;
  std::string model_name;
  std::string reduces_to;
};

int cmd_verify(const VerifyFlags& f) {
  FormulaModel model;
  try {
    model = parse_formula_model(f.model_name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto given = f.model.given_values();
  std::vector<Rational> params;
  for (std::size_t d = 1; d <= parameter_count(model); ++d) {
    auto it = std::find_if(given.begin(), given.end(), [&](const auto& p) { return p.first == d; });
    if (it == given.end()) throw UsageError("model " + f.model_name + " needs " + std::to_string(parameter_count(model)) + " parameter(s)");
    try {
      params.push_back(Rational::parse(it->second));
    } catch (const std::exception&) {
      throw UsageError("not a rational: '" + it->second + "'");
    }
  }
  for (const auto& [d, s] : given)
    if (d > parameter_count(model)) throw UsageError("model " + f.model_name + " takes " + std::to_string(parameter_count(model)) + " parameter(s)");

  const VerificationReport rep = verify_formulas(model, params);
  Json j = to_json(rep);
  bool ok = rep.match;
  if (!f.reduces_to.empty()) {
    FormulaModel to;
    try {
      to = parse_formula_model(f.reduces_to);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    const ReductionReport red = reduction_identity(model, params, to);
    j["reduction"] = to_json(red);
    ok = ok && red.holds;
  }
  j["ok"] = ok;

  const fs::path dir = f.model.out_dir();
  write_json(dir / "verify.json", j);
  std::cout << "verify " << to_string(model) << ": " << rep.elements.size() << " elements, " << rep.mismatches.size() << " mismatch(es)";
  if (j.contains("reduction")) std::cout << ", reduction to " << f.reduces_to << (j["reduction"]["holds"].get<bool>() ? " holds" : " fails");
  std::cout << "\n" << (ok ? "MATCH" : "MISMATCH") << "\n";
  return ok ? kExitOk : kExitMismatch;
}

// ---- metric -----------------------------------------------------------------

struct MetricFlags {
  ModelFlags model;
  std::string coeffs = "uniform";
  std::optional<std::size_t> select_band;
  std::string basis = "rank-one";
  std::uint64_t seed = 0;
  bool charge = false;
};

std::vector<double> parse_coefficients(const std::string& spec, std::size_t n, std::uint64_t seed) {
  if (spec == "uniform") return std::vector<double>(n, 1.0);
  if (spec == "random") {
    // Positive draws from a fixed generator; the mapping to [0.5, 1.5) is done by hand
    // so the values do not depend on the standard library's distribution code.
    std::mt19937_64 gen(seed);
    std::vector<double> c(n);
    for (auto& x : c) x = 0.5 + static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return c;
  }
  std::vector<double> c;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) c.push_back(parse_real(item));
  if (c.size() != n) throw UsageError("--coeffs list needs " + std::to_string(n) + " values, got " + std::to_string(c.size()));
  return c;
}

int cmd_metric(const MetricFlags& f) {
  const std::size_t n = f.model.size();
  const auto h = build_hamiltonian(n, f.model.point());

  PseudometricBasis basis;
  std::vector<double> coefficients;
  if (f.select_band) {
    const std::size_t k = *f.select_band;
    if (k < 1 || k > n) throw UsageError("--select-band must lie in 1..N");
    basis = banded_basis(h);
    coefficients.assign(n, 0.0);
    coefficients[k - 1] = 1.0;
  } else {
    if (f.basis == "rank-one")
      basis = rank_one_basis(h, VectorScaling::unit_norm);
    else if (f.basis == "kernel")
      basis = sylvester_kernel(h);
    else if (f.basis == "banded")
      basis = banded_basis(h);
    else
      throw UsageError("--basis must be rank-one, kernel or banded");
    coefficients = parse_coefficients(f.coeffs, n, f.seed);
  }

  const MetricCandidate m = assemble_metric(basis, coefficients);
  Json j = to_json(m);
  j["dieudonne_residual"] = residual(h, Mat<double>(m.theta));
  if (Eigen::FullPivLU<Eigen::MatrixXd>(m.theta).isInvertible())
    j["quasi_hermiticity_residual"] = quasi_hermiticity_residual(h, m.theta);
  else
    j["quasi_hermiticity_residual"] = nullptr;
  if (m.positivity == Positivity::positive_definite)
    j["dyson"] = to_json(dyson_factor(m, h));
  else
    j["dyson"] = nullptr;
  if (f.charge) j["charge"] = to_json(charge_candidate(m.theta, parity(n)));

  const fs::path dir = f.model.out_dir();
  write_json(dir / "metric.json", j);
  std::cout << "metric: N = " << n << ", basis " << to_string(m.basis_source) << ", " << to_string(m.positivity)
            << " (min eigenvalue " << format_number(m.min_eigenvalue) << ")\n";
  return kExitOk;
}

// ---- ep ---------------------------------------------------------------------

struct EpFlags {
  ModelFlags model;
  std::string bracket;
};

int cmd_ep(const EpFlags& f) {
  const std::size_t n = f.model.size();
  const auto [lo, hi] = parse_range(f.bracket, "--bracket");
  const ParameterPath path = f.model.path(1);
  const EPLocation ep = ep_refine(n, path, lo, hi, kBoundaryTol, f.model.tol_real);
  Json j = to_json(ep);
  const fs::path dir = f.model.out_dir();
  write_json(dir / "ep.json", j);
  std::cout << "ep: lambda* = " << format_number(ep.driver) << ", real count " << ep.real_count_before << " -> " << ep.real_count_after << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, pseudometrics and exceptional points of PT-symmetric tridiagonal lattices"};
  app.require_subcommand(1);

  SpectrumFlags sf;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues at a point or along a sweep (CSV, optional SVG)");
  sf.model.add_to(spectrum);
  spectrum->add_option("--sweep", sf.sweep, "name:lo:hi:steps, e.g. lambda:-1.2:1.2:201");
  spectrum->add_flag("--svg", sf.svg, "also write spectrum.svg");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "exact check of the closed-form pseudometric entries");
  vf.model.add_to(verify, false);
  verify->add_option("--model", vf.model_name, "one, two or three")->required();
  verify->add_option("--expect-reduces-to", vf.reduces_to, "also check the reduction to a smaller model");

  MetricFlags mf;
  auto* metric = app.add_subcommand("metric", "assemble a metric candidate and report its properties");
  mf.model.add_to(metric);
  metric->add_option("--coeffs", mf.coeffs, "uniform, random, or a comma-separated list");
  metric->add_option("--select-band", mf.select_band, "use the single banded pseudometric P^(k)");
  metric->add_option("--basis", mf.basis, "rank-one (default), kernel or banded");
  metric->add_option("--seed", mf.seed, "seed for --coeffs random");
  metric->add_flag("--charge", mf.charge, "include the C = P Theta diagnostic");

  EpFlags ef;
  auto* ep = app.add_subcommand("ep", "locate the first real-count transition in a lambda bracket");
  ef.model.add_to(ep);
  ep->add_option("--bracket", ef.bracket, "lo:hi")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*spectrum) return cmd_spectrum(sf);
    if (*verify) return cmd_verify(vf);
    if (*metric) return cmd_metric(mf);
    if (*ep) return cmd_ep(ef);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Mismatch& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
