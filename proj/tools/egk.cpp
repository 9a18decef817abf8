// egk: batch front end. Exit codes: 0 success, 2 bad arguments, 3 numerical non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "egk/egk.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace egk;

namespace {

std::vector<double> parse_reals(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used > 0 && used == tok.size(), std::string(what) + ": cannot parse '" + tok + "'");
    v.push_back(x);
  }
  require(!v.empty(), std::string(what) + ": empty");
  return v;
}

// "RE,IM[,RE,IM…]"
PointCd parse_point(const std::string& s, const char* what) {
  const auto r = parse_reals(s, what);
  require(r.size() % 2 == 0, std::string(what) + ": expects RE,IM pairs");
  PointCd p;
  for (std::size_t k = 0; k < r.size(); k += 2) p.emplace_back(r[k], r[k + 1]);
  return p;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double x : parse_reals(s, what)) {
    require(x == std::floor(x) && x >= 1 && x <= 1e7, std::string(what) + ": positive integers expected");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

json plain(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// (log_mod, phase) with the plain value when it fits in a double
json to_json(const LogComplex& v) {
  json j{{"log_mod", v.is_zero() ? json(nullptr) : json(v.log_mod)}, {"phase", v.phase}};
  if (v.is_zero() || v.log_mod < 700) {
    const cplx c = v.to_complex();
    j["re"] = c.real();
    j["im"] = c.imag();
  } else {
    j["re"] = nullptr;
    j["im"] = nullptr;
  }
  return j;
}

json to_json(cplx c) { return to_json(LogComplex::from_complex(c)); }

json to_json(const ConvergenceReport& r) {
  json e = json::array();
  for (double x : r.errors) e.push_back(plain(x));
  return {{"target", r.target},         {"n_values", r.n_values},         {"errors", e},
          {"fitted_exponent", plain(r.fitted_exponent)}, {"fit_residual", plain(r.fit_residual)},
          {"degenerate", r.degenerate}};
}

json to_json(const std::vector<CheckResult>& rs, bool& all) {
  json a = json::array();
  for (const auto& r : rs) {
    all = all && r.pass;
    a.push_back({{"name", r.name}, {"pass", r.pass}, {"worst", plain(r.worst)}, {"tolerance", r.tolerance}, {"samples", r.samples}});
  }
  return a;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot open output file " + path);
  f.precision(17);
  return f;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    auto f = open_out(out);
    f << j.dump(2) << "\n";
  }
}

// XMIN:XMAX:NX,YMIN:YMAX:NY
HistogramGrid parse_grid(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ':') c = ',';
  const auto v = parse_reals(t, "--grid");
  require(v.size() == 6, "--grid: expects XMIN:XMAX:NX,YMIN:YMAX:NY");
  HistogramGrid g{v[0], v[1], static_cast<int>(v[2]), v[3], v[4], static_cast<int>(v[5])};
  require(g.nx >= 1 && g.ny >= 1 && g.nx * static_cast<long>(g.ny) <= 4000000 &&
              (g.nx == 1 ? g.xmax >= g.xmin : g.xmax > g.xmin) && (g.ny == 1 ? g.ymax >= g.ymin : g.ymax > g.ymin),
          "--grid: bad bounds or resolution");
  return g;
}

double cell(double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }

void set_field(StudySpec& s, const std::string& key, const std::string& val) {
  if (key == "d") {
    s.d = parse_ints(val, "d")[0];
  } else if (key == "tau") {
    s.tau = parse_reals(val, "tau")[0];
  } else if (key == "kappa") {
    s.kappa = parse_reals(val, "kappa")[0];
  } else if (key == "z") {
    s.z = parse_point(val, "z");
  } else if (key == "zp") {
    s.zp = parse_point(val, "zp");
  } else if (key == "x") {
    s.x = parse_reals(val, "x");
  } else if (key == "omega") {
    s.omega = parse_reals(val, "omega");
  } else if (key == "u") {
    s.u = parse_point(val, "u");
  } else if (key == "v") {
    s.v = parse_point(val, "v");
  } else {
    throw DomainError("--point-spec: unknown key '" + key + "'");
  }
}

// "key=val;key=val" on top of the target's defaults
StudySpec parse_point_spec(const std::string& target, const std::string& spec) {
  StudySpec s = default_study_spec(target);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    require(eq != std::string::npos, "--point-spec: expected key=value, got '" + item + "'");
    set_field(s, item.substr(0, eq), item.substr(eq + 1));
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and asymptotic kernels of the elliptic Ginibre ensemble"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides EGK_THREADS)")->check(CLI::NonNegativeNumber);

  int n = 1, d = 1, draws = 1, res = 200;
  double tau = 0.5, kappa = 0.5;
  std::uint64_t seed = 1;
  std::string out, z, zp, grid, method = "hermite", target, nlist = "50,100,200,400", pspec, x, xp, mode, u, v, omega,
                                hist, scan, suite = "all";
  bool as_json = false, exact = false, asymptotic = false, bulk = false, edge = false, unscaled = false;

  auto* density = app.add_subcommand("density", "one-point density on a grid (CSV)");
  density->add_option("--n", n)->required();
  density->add_option("--d", d)->required();
  density->add_option("--tau", tau)->required();
  density->add_option("--grid", grid)->required();
  auto* fe = density->add_flag("--exact", exact);
  density->add_flag("--asymptotic", asymptotic)->excludes(fe);
  density->add_option("--out", out)->required();

  auto* kernel = app.add_subcommand("kernel", "exact kernel at a pair of points");
  kernel->add_option("--n", n)->required();
  kernel->add_option("--d", d)->required();
  kernel->add_option("--tau", tau)->required();
  kernel->add_option("--z", z)->required();
  kernel->add_option("--zp", zp)->required();
  kernel->add_option("--method", method)->check(CLI::IsMember({"hermite", "contour", "fermi"}));
  kernel->add_flag("--unscaled", unscaled, "the kernel itself rather than its sqrt(n) rescaling");
  kernel->add_flag("--json", as_json);

  auto* compare = app.add_subcommand("compare", "convergence study of a limit against the exact kernel");
  compare->add_option("--target", target)->required()->check(CLI::IsMember(study_targets()));
  compare->add_option("--n-list", nlist);
  compare->add_option("--point-spec", pspec, "key=value;... with keys d,tau,kappa,z,zp,x,omega,u,v");
  compare->add_option("--out", out);

  auto* saddle = app.add_subcommand("saddle", "saddle set, g, h, max inequality and region grid (CSV)");
  saddle->add_option("--tau", tau)->required();
  saddle->add_option("--z", z)->required();
  saddle->add_option("--zp", zp)->required();
  saddle->add_option("--scan", scan, "window XMIN:XMAX,YMIN:YMAX");
  saddle->add_option("--res", res)->check(CLI::Range(2, 2000));
  saddle->add_option("--out", out)->required();

  auto* fermi = app.add_subcommand("fermi", "fermion kernel and its bulk or edge limit");
  fermi->add_option("--n", n)->required();
  fermi->add_option("--d", d)->required();
  fermi->add_option("--x", x)->required();
  fermi->add_option("--xp", xp);
  auto* fb = fermi->add_flag("--bulk", bulk);
  fermi->add_flag("--edge", edge)->excludes(fb);
  fermi->add_flag("--json", as_json);

  auto* weak = app.add_subcommand("weak", "weakly non-Hermitian limiting kernels");
  weak->add_option("--d", d)->required();
  weak->add_option("--kappa", kappa)->required();
  weak->add_option("--mode", mode)->required()->check(CLI::IsMember({"bulk", "edge"}));
  weak->add_option("--u", u)->required();
  weak->add_option("--v", v)->required();
  weak->add_option("--x", x);
  weak->add_option("--omega", omega);
  weak->add_flag("--json", as_json);

  auto* sample = app.add_subcommand("sample", "eigenvalues of sampled matrices (CSV)");
  sample->add_option("--n", n)->required();
  sample->add_option("--tau", tau)->required();
  sample->add_option("--draws", draws)->required();
  sample->add_option("--seed", seed)->required();
  sample->add_option("--out", out)->required();
  sample->add_option("--hist", hist, "NXxNY histogram on [-2,2]^2 instead of raw eigenvalues");

  auto* verify = app.add_subcommand("verify", "property suites");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"saddle", "identities", "kernels", "all"}));
  verify->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (density->parsed()) {
      const HistogramGrid g = parse_grid(grid);
      const KernelParams p{n, d, tau, true};
      p.validate();
      const double nd = std::pow(static_cast<double>(n), d);
      std::vector<double> val(static_cast<std::size_t>(g.nx) * g.ny);
      parallel_for(static_cast<long>(val.size()), [&](long k) {
        PointCd Z(d, 0.0);
        Z[0] = cplx(cell(g.xmin, g.xmax, g.nx, static_cast<int>(k % g.nx)), cell(g.ymin, g.ymax, g.ny, static_cast<int>(k / g.nx)));
        if (asymptotic)
          val[k] = d == 1 ? one_point_d1(p, Z[0]) : one_point_dd(p, Z).leading / nd;
        else
          val[k] = kernel_hermite_sum(p, Z, Z).real() / nd;
      });
      auto f = open_out(out);
      f << "x,y,density\n";
      for (std::size_t k = 0; k < val.size(); ++k)
        f << cell(g.xmin, g.xmax, g.nx, static_cast<int>(k % g.nx)) << ","
          << cell(g.ymin, g.ymax, g.ny, static_cast<int>(k / g.nx)) << "," << val[k] << "\n";
    } else if (kernel->parsed()) {
      const PointCd Z = parse_point(z, "--z"), Zp = parse_point(zp, "--zp");
      require(static_cast<int>(Z.size()) == d && static_cast<int>(Zp.size()) == d, "--z/--zp: need d complex coordinates");
      json j{{"n", n}, {"d", d}, {"tau", tau}, {"method", method}};
      if (method == "fermi") {
        PointRd X, Xp;
        for (int k = 0; k < d; ++k) {
          require(Z[k].imag() == 0 && Zp[k].imag() == 0, "--method fermi: points must be real");
          X.push_back(Z[k].real());
          Xp.push_back(Zp[k].real());
        }
        j.update(to_json(LogComplex::from_real(kernel_fermi(n, d, X, Xp))));
      } else {
        const KernelParams p{n, d, tau, !unscaled};
        j.update(to_json(method == "hermite" ? kernel_hermite_sum(p, Z, Zp) : kernel_contour(p, Z, Zp)));
      }
      std::cout << (as_json ? j.dump(2) : j.dump()) << "\n";
    } else if (compare->parsed()) {
      const StudySpec s = parse_point_spec(target, pspec);
      emit(to_json(run_study(target, s, parse_ints(nlist, "--n-list"))), out);
    } else if (saddle->parsed()) {
      const PointCd a = parse_point(z, "--z"), b = parse_point(zp, "--zp");
      require(a.size() == 1 && b.size() == 1, "saddle: --z and --zp are scalars");
      const PhaseContext c = make_context(tau, a[0], b[0]);
      const SaddleSet S = saddle_points(a[0], b[0]);
      auto f = open_out(out);
      f << "kind,name,x,y,value\n";
      for (Which w : {Which::a, Which::a_inv, Which::b, Which::b_inv}) {
        const cplx s = S.value(w);
        f << "saddle," << to_string(w) << "," << s.real() << "," << s.imag() << ","
          << (is_singular_point(s) ? std::string("") : std::to_string(F_eval(c, s).real())) << "\n";
      }
      f << "case,," << ",," << to_string(S.case_tag) << "\n";
      for (const auto& [nm, e] : {std::pair{"z", S.ez}, std::pair{"zp", S.ezp}})
        if (tau < 1) f << "g," << nm << "," << e.xi << "," << e.eta << "," << g_eval(e.xi, e.eta, tau) << "\n";
      for (int k = 0; k < 64; ++k) {
        const cplx zeta = std::polar(1.0, 2 * std::numbers::pi * (k + 0.5) / 64);
        f << "h," << k << "," << zeta.real() << "," << zeta.imag() << "," << h_eval(c, S, zeta).real() << "\n";
      }
      const MaxInequalityReport r = verify_max_inequality(c, 4096);
      f << "report,theorem_case,,," << r.theorem_case << "\n"
        << "report,max_excess,,," << r.max_excess << "\n"
        << "report,variation,,," << r.variation << "\n"
        << "report,inequality_holds,,," << r.inequality_holds << "\n"
        << "report,equality_set_matches,,," << r.equality_set_matches << "\n";
      for (double th : r.equality_angles) f << "equality,,," << th << ",\n";
      if (!scan.empty()) {
        std::string t = scan;
        for (char& ch : t)
          if (ch == ':') ch = ',';
        const auto wv = parse_reals(t, "--scan");
        require(wv.size() == 4, "--scan: expects XMIN:XMAX,YMIN:YMAX");
        const Window w{wv[0], wv[1], wv[2], wv[3]};
        const auto grid_ind = region_scan(c, F_eval(c, S.a_inv).real(), w, res, res);
        for (int j = 0; j < res; ++j)
          for (int i = 0; i < res; ++i)
            f << "region,," << cell(w.xmin, w.xmax, res, i) << "," << cell(w.ymin, w.ymax, res, j) << ","
              << int(grid_ind[static_cast<std::size_t>(j) * res + i]) << "\n";
      }
    } else if (fermi->parsed()) {
      const PointRd X = parse_reals(x, "--x"), Xp = xp.empty() ? X : parse_reals(xp, "--xp");
      require(static_cast<int>(X.size()) == d && static_cast<int>(Xp.size()) == d, "--x/--xp: need d coordinates");
      json j{{"n", n}, {"d", d}, {"exact", plain(kernel_fermi(n, d, X, Xp))}};
      if (edge) {
        // base point on the sphere |X| = √2 along x, microscopic offsets at scale √2 n^{2/3}
        const double r = std::sqrt(norm2(X));
        require(r > 0, "--edge: x must be nonzero");
        const double sc = std::sqrt(2.0) * std::pow(n, 2.0 / 3.0);
        PointRd X0(d), U(d), V(d);
        for (int k = 0; k < d; ++k) {
          X0[k] = std::sqrt(2.0) * X[k] / r;
          U[k] = (X[k] - X0[k]) * sc;
          V[k] = (Xp[k] - X0[k]) * sc;
        }
        j["edge_point"] = X0;
        j["u"] = U;
        j["v"] = V;
        j["exact_scaled"] = plain(kernel_fermi(n, d, X, Xp) / std::pow(sc, d));
        j["limit"] = plain(fermi_edge_kernel(d, X0, U, V));
      } else {
        j["exact_density"] = plain(kernel_fermi(n, d, X, X) * std::tgamma(d + 1.0) / std::pow(n, d));
        j["limit_density"] = plain(fermi_bulk_density(d, X));
      }
      std::cout << (as_json ? j.dump(2) : j.dump()) << "\n";
    } else if (weak->parsed()) {
      const PointCd U = parse_point(u, "--u"), V = parse_point(v, "--v");
      require(static_cast<int>(U.size()) == d && static_cast<int>(V.size()) == d, "--u/--v: need d complex coordinates");
      json j{{"d", d}, {"kappa", kappa}, {"mode", mode}};
      if (mode == "bulk") {
        const PointRd X = x.empty() ? PointRd(d, 0.0) : parse_reals(x, "--x");
        require(static_cast<int>(X.size()) == d, "--x: need d coordinates");
        j["corrected"] = to_json(weak_bulk_kernel(X, kappa, U, V));
        j["printed"] = to_json(weak_bulk_kernel(X, kappa, U, V, Variant::printed));
      } else {
        PointRd W(d, 0.0);
        W[0] = 1;
        if (!omega.empty()) W = parse_reals(omega, "--omega");
        require(static_cast<int>(W.size()) == d, "--omega: need d coordinates");
        j["corrected"] = to_json(weak_edge_kernel(d, kappa, W, U, V));
        j["printed"] = to_json(weak_edge_kernel(d, kappa, W, U, V, Variant::printed));
      }
      std::cout << (as_json ? j.dump(2) : j.dump()) << "\n";
    } else if (sample->parsed()) {
      const auto spectra = sample_spectra(n, tau, draws, seed);
      auto f = open_out(out);
      if (hist.empty()) {
        f << "draw,index,re,im\n";
        for (std::size_t k = 0; k < spectra.size(); ++k)
          for (std::size_t i = 0; i < spectra[k].size(); ++i)
            f << k << "," << i << "," << spectra[k][i].real() << "," << spectra[k][i].imag() << "\n";
      } else {
        const auto xpos = hist.find('x');
        require(xpos != std::string::npos, "--hist: expects NXxNY");
        HistogramGrid g;
        g.nx = parse_ints(hist.substr(0, xpos), "--hist")[0];
        g.ny = parse_ints(hist.substr(xpos + 1), "--hist")[0];
        std::vector<cplx> all;
        for (const auto& e : spectra) all.insert(all.end(), e.begin(), e.end());
        const EmpiricalDensity e = empirical_density(all, tau, n, g);
        const double area = (g.xmax - g.xmin) / g.nx * (g.ymax - g.ymin) / g.ny;
        f << "x,y,count,density\n";
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i) {
            const long c = e.counts[static_cast<std::size_t>(j) * g.nx + i];
            f << g.xmin + (i + 0.5) * (g.xmax - g.xmin) / g.nx << "," << g.ymin + (j + 0.5) * (g.ymax - g.ymin) / g.ny << ","
              << c << "," << c / (area * draws * n) << "\n";
          }
        std::cout << json{{"points", e.points}, {"inside_fraction", e.inside_fraction}}.dump() << "\n";
      }
    } else if (verify->parsed()) {
      bool all = true;
      json j{{"suite", suite}};
      if (suite == "identities" || suite == "all") j["identities"] = to_json(identity_suite(), all);
      if (suite == "saddle" || suite == "all") j["saddle"] = to_json(saddle_suite(), all);
      if (suite == "kernels" || suite == "all") j["kernels"] = to_json(kernel_suite(), all);
      j["pass"] = all;
      std::cout << (as_json ? j.dump(2) : j.dump()) << "\n";
      return all ? 0 : 1;
    }
  } catch (const DomainError& e) {
    std::cerr << "egk: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "egk: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "egk: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
