// Batch driver: one subcommand per experiment, CSV on stdout or into --out.
// Exit codes: 1 parse error, 2 precondition, 3 numerical assertion.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cauchyfact/cauchyfact.hpp"

using namespace cauchyfact;

namespace {

struct Common {
  std::string curve_file;
  std::optional<double> grid_left;
  std::optional<double> grid_spacing;
  std::optional<std::size_t> grid_count;
  std::uint64_t seed = 1;
  std::string out;
};

// Output files are held until the command finishes, so failures leave nothing.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, content

  void add(std::string name, const CsvTable& t) { files.emplace_back(std::move(name), t.str()); }

  void flush(const std::string& dir) const {
    if (dir.empty()) {
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << files[i].second;
      }
      return;
    }
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) {
      std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
      if (!f) throw Error("cannot write " + name + " in " + dir);
      f << content;
    }
  }
};

LipschitzCurve curve_of(const Common& c) {
  return c.curve_file.empty() ? flat_curve() : load_curve(c.curve_file);
}

// Grid from flags; anything unset falls back to [lo, lo + span] with n nodes.
UniformGrid grid_of(const Common& c, double lo, double span, std::size_t n) {
  const std::size_t count = c.grid_count.value_or(n);
  detail::require(count >= 2, "grid: --grid-count must be >= 2");
  const double spacing = c.grid_spacing.value_or(span / static_cast<double>(count - 1));
  return UniformGrid(c.grid_left.value_or(lo), spacing, count);
}

// Nodes per radius for the factor grids (r = 1): round(1 / spacing).
int nodes_per_radius(const Common& c, int fallback) {
  if (!c.grid_spacing) return fallback;
  const double q = 1.0 / *c.grid_spacing;
  detail::require(*c.grid_spacing > 0 && std::abs(q - std::round(q)) < 1e-9 && q >= 1,
                  "--grid-spacing must be 1/q for an integer q >= 1 here");
  return static_cast<int>(std::lround(q));
}

// Real profiles φ; the symbol handed to the operators is 𝔄 = φ b.
std::function<double(double)> profile(const std::string& name, double h) {
  static const std::map<std::string, int> ids = {
      {"bump", 0}, {"bump3", 1}, {"sawtooth", 2}, {"log", 3}, {"log2", 4}, {"const", 5}};
  auto it = ids.find(name);
  detail::require(it != ids.end(), "unknown symbol '" + name + "'");
  switch (it->second) {
    case 0: return [](double x) { return smooth_bump(x); };
    case 1: return [](double x) { return 3.0 * smooth_bump(x); };
    case 2: return [](double x) { return sawtooth(x); };
    case 3: return [h](double x) { return clamped_log(x, h); };
    case 4: return [h](double x) { return 2.0 * clamped_log(x, h); };
    default: return [](double) { return 1.0; };
  }
}

GridFunction symbol_of(const AccretiveWeight& w, const UniformGrid& g, const std::string& name) {
  return multiply_by_b(w, GridFunction::sample(g, profile(name, g.spacing())));
}

void hilbert_check(const Common& c, Outputs& out) {
  UniformGrid g = grid_of(c, -8.0, 16.0, 4096);
  auto Cf = apply_related_cauchy(flat_curve(), indicator(g, Interval{0.0, 1.0}));
  CsvTable nodes({"x", "re", "im", "exact_im", "rel_error"});
  double worst = 0.0;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const double x = g.node(i);
    if (std::abs(std::abs(x) - 1.0) <= 0.1) continue;
    const double ex = std::log(std::abs((x + 1.0) / (x - 1.0))) / std::numbers::pi;
    const double e = std::abs(Cf[i] - cplx(0.0, ex)) / std::abs(ex);
    worst = std::max(worst, e);
    nodes.row() << x << Cf[i].real() << Cf[i].imag() << ex << e;
  }
  CsvTable summary({"N", "spacing", "max_rel_error"});
  summary.row() << g.count() << g.spacing() << worst;
  out.add("hilbert_check.csv", summary);
  if (!c.out.empty()) out.add("hilbert_check_nodes.csv", nodes);
}

void two_bump(const Common& c, const std::vector<double>& ms, Outputs& out) {
  AccretiveWeight w(curve_of(c));
  const int q = nodes_per_radius(c, 4);
  CsvTable t({"M", "i0", "terms", "sum_alpha", "max_alpha", "max_cert_residual",
              "reconstruction_error"});
  for (double M : ms) {
    UniformGrid g = factor_grid(Interval{0.0, 1.0}, M, q);
    auto f = two_bump_function(w, g, 0.0, M, 1.0);
    auto dec = decompose_two_bump(w, f, 0.0, M, 1.0);
    double max_alpha = 0.0, max_cert = 0.0;
    for (const auto& term : dec.terms) {
      max_alpha = std::max(max_alpha, std::abs(term.coefficient));
      max_cert = std::max(max_cert, term.certificate.cancellation_residual);
    }
    auto back = reconstruct(dec, g);
    double rec = 0.0;
    for (std::size_t i = 0; i < g.count(); ++i) rec = std::max(rec, std::abs(back[i] - f[i]));
    t.row() << M << dec.i0 << dec.terms.size() << two_bump_norm_bound(dec) << max_alpha
            << max_cert << rec;
    if (!c.out.empty()) out.add("two_bump_M" + format_real(M) + ".csv", dec.to_csv());
  }
  out.add("two_bump.csv", t);
}

void factor_atom(const Common& c, const std::vector<double>& ms, Outputs& out) {
  AccretiveWeight w(curve_of(c));
  const int q = nodes_per_radius(c, 4);
  const Interval I{0.0, 1.0};
  CsvTable t({"M", "re_denom", "im_denom", "norm_product", "residual_sup_Mr",
              "residual_estimate"});
  for (double M : ms) {
    UniformGrid g = factor_grid(I, M, q);
    auto a = odd_atom(w, g, I.center, I.radius);
    auto p = approx_factor_atom_with_M(w, a, I, M);
    auto res = residual(w, a, p);
    t.row() << M << p.denom.real() << p.denom.imag() << p.norm_product
            << res.sup_norm() * M * I.radius << estimate_residual_h1b(w, res, p.x0, p.y0, p.r);
  }
  out.add("factor_atom.csv", t);
}

void weak_factorize_cmd(const Common& c, double eps, int stages, Outputs& out) {
  AccretiveWeight w(curve_of(c));
  WeakFactorizationOptions opt;
  opt.nodes_per_radius = nodes_per_radius(c, 8);
  const Interval I{3.0, 1.0};
  UniformGrid g = factor_grid(I, select_M(eps), opt.nodes_per_radius);
  auto a = odd_atom(w, g, I.center, I.radius);
  auto wf = weak_factorize(w, single_atom(w, a, I), eps, stages, opt);
  CsvTable trace({"k", "residual_estimate"});
  for (std::size_t k = 0; k < wf.residual_trace.size(); ++k)
    trace.row() << k << wf.residual_trace[k];
  CsvTable summary({"eps", "K", "M", "C0_measured", "contracting", "lambda_sum",
                    "factor_norm_sum", "canonical_defect", "final_atoms"});
  summary.row() << wf.eps << wf.K << wf.M << wf.C0_measured << (wf.contracting ? 1 : 0)
                << wf.lambda_sum << wf.factor_norm_sum << wf.canonical_defect << wf.final_atoms;
  out.add("weak_trace.csv", trace);
  out.add("weak_summary.csv", summary);
  out.add("weak_terms.csv", wf.to_csv());
  if (!wf.contracting)
    std::cerr << "weak-factorize: not contracting, eps * C0 = " << format_real(eps * wf.C0_measured)
              << '\n';
}

void commutator_study(const Common& c, double p, int trials, Outputs& out) {
  AccretiveWeight w(curve_of(c));
  UniformGrid g = grid_of(c, -8.0, 16.0, 2048);
  CsvTable t({"symbol_name", "bmo_norm", "commutator_norm_estimate", "p", "N", "kind"});
  std::vector<double> bmo, est;
  for (const char* name : {"bump", "bump3", "sawtooth", "log", "log2", "const"}) {
    auto sym = symbol_of(w, g, name);
    const double b = bmo_b_norm(w, sym, 10);
    auto e = commutator_norm_estimate({sym, w, CommutatorVariant::cauchy}, p, trials, c.seed);
    t.row() << name << b << e.value << p << g.count()
            << (e.lower_bound_only ? "lower_bound" : "norm");
    if (std::string(name) != "const") {
      bmo.push_back(b);
      est.push_back(e.value);
    }
  }
  out.add("commutator_study.csv", t);
  std::cerr << "spearman " << format_real(spearman_rank_correlation(bmo, est)) << '\n';
}

void compactness_cmd(const Common& c, const std::string& symbol, double center, double radius,
                     int rank_cap, Outputs& out) {
  AccretiveWeight w(curve_of(c));
  UniformGrid g = grid_of(c, -8.0, 16.0, 2048);
  auto sv = compactness_profile({symbol_of(w, g, symbol), w}, Interval{center, radius}, rank_cap);
  CsvTable t({"k", "sigma_k"});
  for (std::size_t k = 0; k < sv.size(); ++k) t.row() << k + 1 << sv[k];
  out.add("compactness_profile.csv", t);
}

void vmo_cmd(const Common& c, const std::string& symbol, std::vector<double> scales,
             Outputs& out) {
  AccretiveWeight w(curve_of(c));
  UniformGrid g = grid_of(c, -32.0, 64.0, 4097);
  auto rep = vmo_profile(divide_by_b(w, symbol_of(w, g, symbol)), scales);
  out.add("vmo_profile.csv", rep.to_csv());
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--curve", c.curve_file, "curve file (anchor/breakpoints/slopes); flat if omitted");
  sub->add_option("--grid-left", c.grid_left, "leftmost node");
  sub->add_option("--grid-spacing", c.grid_spacing, "node spacing");
  sub->add_option("--grid-count", c.grid_count, "number of nodes");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "output directory (stdout if omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cauchyfact: Cauchy integrals, two-bump atoms and weak factorization"};
  app.require_subcommand(1);

  Common common;
  std::vector<double> m_list;
  double eps = 0.05, p = 2.0, center = 0.0, radius = 1.0;
  int stages = 4, trials = 8, rank_cap = 12;
  std::string symbol = "bump";
  std::vector<double> scales{0.125, 0.25, 0.5, 1, 2, 4, 8, 16};

  auto* hc = app.add_subcommand("hilbert-check", "flat-curve indicator oracle");
  auto* tb = app.add_subcommand("two-bump", "two-bump decomposition sweep over M");
  auto* fa = app.add_subcommand("factor-atom", "approximate factorization residual sweep");
  auto* wk = app.add_subcommand("weak-factorize", "iterated factorization trace");
  auto* cs = app.add_subcommand("commutator-study", "commutator norm against BMO norm");
  auto* cp = app.add_subcommand("compactness-profile", "leading singular values on a window");
  auto* vp = app.add_subcommand("vmo-profile", "three-limit oscillation profile");
  for (auto* s : {hc, tb, fa, wk, cs, cp, vp}) add_common(s, common);

  tb->add_option("--m-list", m_list, "values of M")->delimiter(',');
  fa->add_option("--m-list", m_list, "values of M")->delimiter(',');
  wk->add_option("--eps", eps, "target accuracy");
  wk->add_option("--stages", stages, "number of stages K");
  cs->add_option("--p", p, "exponent; p != 2 gives a probe lower bound");
  cs->add_option("--trials", trials, "random probes for p != 2");
  cp->add_option("--symbol", symbol, "bump|bump3|sawtooth|log|log2|const");
  cp->add_option("--window-center", center);
  cp->add_option("--window-radius", radius);
  cp->add_option("--rank-cap", rank_cap);
  vp->add_option("--symbol", symbol, "bump|bump3|sawtooth|log|log2|const");
  vp->add_option("--scales", scales, "increasing scales")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Outputs out;
    if (hc->parsed()) {
      hilbert_check(common, out);
    } else if (tb->parsed()) {
      if (m_list.empty()) m_list = {128, 256, 512, 1024};
      two_bump(common, m_list, out);
    } else if (fa->parsed()) {
      if (m_list.empty()) m_list = {128, 256, 512, 1024, 2048, 4096};
      factor_atom(common, m_list, out);
    } else if (wk->parsed()) {
      weak_factorize_cmd(common, eps, stages, out);
    } else if (cs->parsed()) {
      commutator_study(common, p, trials, out);
    } else if (cp->parsed()) {
      compactness_cmd(common, symbol, center, radius, rank_cap, out);
    } else if (vp->parsed()) {
      vmo_cmd(common, symbol, scales, out);
    }
    out.flush(common.out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const PreconditionError& e) {  // GridError included
    std::cerr << "precondition: " << e.what() << '\n';
    return 2;
  } catch (const NumericalAssertion& e) {
    std::cerr << "numerical assertion: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
