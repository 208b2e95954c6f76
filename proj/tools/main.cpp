// caloronkit command line: generate test data, compute characteristic and
// string forms, and run the verification suites.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "caloronkit/verify.hpp"

using namespace caloronkit;

namespace {

struct Options {
  std::string grid;  // empty: command-specific default
  int rank = 2;
  int cutoff = 0;  // 0 = automatic: every representable degree
  std::uint64_t seed = 7;
  int band = 2;
  double amplitude = 0.2;
  double tol = 1e-8;
  double exact_tol = 1e-7;
  int ode_steps = 256;
  int samples = 17;
  std::string out = "out.json";
  std::string algorithm = "default";
  std::string in, in2, from;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid,
                  "grid spec (e.g. 32x32x64s1, i9:0:1x...x24s1, sph24:24:48, or a .json descriptor)");
  cmd->add_option("--rank", o.rank, "matrix rank n");
  cmd->add_option("--cutoff", o.cutoff, "series cutoff (0 = every representable degree)");
  cmd->add_option("--seed", o.seed, "random seed (required for reproducibility)");
  cmd->add_option("--band-limit", o.band, "frequency band of generated data");
  cmd->add_option("--amplitude", o.amplitude, "amplitude of generated data");
  cmd->add_option("--tol", o.tol, "identity tolerance");
  cmd->add_option("--exact-tol", o.exact_tol, "exactness/period tolerance");
  cmd->add_option("--ode-steps", o.ode_steps, "holonomy integrator steps");
  cmd->add_option("--out", o.out, "output file");
}

json error_json(const std::string& what) { return json{{"error", what}}; }

std::string csv_path(std::string out) {
  auto pos = out.rfind(".json");
  if (pos != std::string::npos) out.erase(pos);
  return out + ".csv";
}

// Flat CSV projection of a graded form: per-degree sup norms, top-degree
// integrals, and subtorus periods on torus grids.
void write_graded_csv(const std::string& path, const std::string& quantity, const GradedForm& f,
                      const std::vector<std::pair<std::string, double>>& extras) {
  std::ofstream os(path, std::ios::trunc);
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "quantity,degree,stat,cycle,value_re,value_im\n";
  for (const auto& [deg, t] : f.terms) {
    os << quantity << "," << deg << ",sup_norm,," << num(sup_norm(t)) << ",0\n";
    if (t.degree() == f.grid->dim()) {
      auto I = integrate(t);
      os << quantity << "," << deg << ",integral,," << num(I[0].real()) << ","
         << num(I[0].imag()) << "\n";
    }
    if (f.grid->all_circles()) {
      for (const auto& pr : periods(t)) {
        std::string cyc;
        for (size_t i = 0; i < pr.cycle.size(); ++i) {
          if (i) cyc += "|";
          cyc += std::to_string(pr.cycle[i]);
        }
        os << quantity << "," << deg << ",period," << cyc << "," << num(pr.value.real()) << ","
           << num(pr.value.imag()) << "\n";
      }
    }
  }
  for (const auto& [k, v] : extras) os << quantity << ",," << k << ",," << num(v) << ",0\n";
}

int cmd_generate(const Options& o, const std::string& kind, bool unitary, bool based, int winding,
                 const std::string& homotopy_kind, int n_t) {
  GridPtr g = parse_grid_spec(o.grid.empty() ? "16x16x32s1" : o.grid);
  if (kind == "pair") {
    ConnectionPair p = random_pair(g, o.rank, o.seed, o.band, o.amplitude, unitary);
    write_json_file(o.out, pair_to_json(p));
  } else if (kind == "map") {
    if (winding != 0) {
      // explicit phase map e^{i k theta} on the last axis
      std::vector<cplx> v(static_cast<size_t>(g->npoints()));
      std::vector<double> x(static_cast<size_t>(g->dim()));
      for (long p = 0; p < g->npoints(); ++p) {
        g->point_coords(p, x.data());
        v[static_cast<size_t>(p)] =
            std::exp(cplx(0.0, winding * x[static_cast<size_t>(g->dim() - 1)]));
      }
      write_json_file(o.out, map_to_json(GroupMap::from_values(g, 1, std::move(v), true, based)));
    } else {
      write_json_file(
          o.out, map_to_json(random_smooth_map(g, o.rank, o.seed, o.band, o.amplitude, unitary, based)));
    }
  } else if (kind == "form") {
    write_json_file(o.out,
                    form_to_json(random_form(g, 1, o.rank, o.seed, o.band, o.amplitude, unitary)));
  } else if (kind == "homotopy") {
    if (homotopy_kind == "rotation") {
      GroupMap m = map_from_json(read_json_file(o.from));
      write_json_file(o.out, map_to_json(rotation_homotopy_family(m, n_t)));
    } else if (homotopy_kind == "random") {
      write_json_file(o.out,
                      map_to_json(random_homotopy(g, o.rank, o.seed, o.band, o.amplitude, n_t)));
    } else {
      throw std::invalid_argument("unknown homotopy kind '" + homotopy_kind + "'");
    }
  } else {
    throw std::invalid_argument("unknown data kind '" + kind + "'");
  }
  return 0;
}

int effective_cutoff(const Options& o, const Grid& g) {
  return o.cutoff > 0 ? o.cutoff : (g.dim() + 1) / 2;
}

ConnectionPair load_pair(const std::string& path) {
  json j = read_json_file(path);
  if (j.contains("A") && j.contains("Phi")) return pair_from_json(j);
  if (j.contains("a")) return inverse_caloron(framed_from_json(j));
  throw std::invalid_argument(path + ": neither a pair nor a framed connection");
}

int cmd_compute(const Options& oin, const std::string& quantity) {
  Options o = oin;
  if (o.cutoff <= 0 && !o.in.empty()) {
    json j = read_json_file(o.in);
    const json& gj = j.contains("grid") ? j.at("grid")
                                        : (j.contains("A") ? j.at("A").at("grid") : j.at("a").at("grid"));
    o.cutoff = effective_cutoff(oin, *grid_from_json(gj));
  }
  std::vector<std::pair<std::string, double>> extras;
  if (quantity == "chern") {
    FramedConnection fc = caloron_transform(load_pair(o.in));
    GradedForm ch = chern_character(fc.a, o.cutoff);
    write_json_file(o.out, graded_to_json(ch));
    write_graded_csv(csv_path(o.out), quantity, ch, extras);
  } else if (quantity == "odd-chern") {
    GroupMap m = map_from_json(read_json_file(o.in));
    GradedForm ch = odd_chern_character(m, o.cutoff);
    write_json_file(o.out, graded_to_json(ch));
    write_graded_csv(csv_path(o.out), quantity, ch, extras);
  } else if (quantity == "cs") {
    FormPath line = FormPath::line(caloron_transform(load_pair(o.in)).a,
                                   caloron_transform(load_pair(o.in2)).a);
    GradedForm cs = chern_simons(line, o.cutoff);
    if (o.algorithm == "slice" || o.algorithm == "both") {
      std::vector<MatrixForm> samples;
      for (int k = 0; k < o.samples; ++k)
        samples.push_back(line.at(static_cast<double>(k) / (o.samples - 1)));
      GradedForm cs2 = chern_simons_via_slices(FormPath::sampled(samples), o.cutoff);
      if (o.algorithm == "slice")
        cs = cs2;
      else
        extras.emplace_back("cross_defect", graded_max_diff(cs, cs2));
    }
    write_json_file(o.out, graded_to_json(cs));
    write_graded_csv(csv_path(o.out), quantity, cs, extras);
  } else if (quantity == "string-form") {
    ConnectionPair p = load_pair(o.in);
    GradedForm s = string_form(p, o.cutoff, StringFormAlg::Direct);
    if (o.algorithm == "via-caloron")
      s = string_form(p, o.cutoff, StringFormAlg::ViaCaloron);
    else if (o.algorithm == "both")
      extras.emplace_back("cross_defect",
                          graded_max_diff(s, string_form(p, o.cutoff, StringFormAlg::ViaCaloron)));
    write_json_file(o.out, graded_to_json(s));
    write_graded_csv(csv_path(o.out), quantity, s, extras);
  } else if (quantity == "string-potential") {
    PairPath line = straight_line(load_pair(o.in), load_pair(o.in2));
    GradedForm S = string_potential(line, o.cutoff, StringPotentialAlg::Explicit);
    if (o.algorithm == "slice") S = string_potential(line, o.cutoff, StringPotentialAlg::Slice);
    if (o.algorithm == "cs-fiber")
      S = string_potential(line, o.cutoff, StringPotentialAlg::CsFiber);
    if (o.algorithm == "all") {
      extras.emplace_back("cross_defect_slice",
                          graded_max_diff(S, string_potential(line, o.cutoff,
                                                              StringPotentialAlg::Slice)));
      extras.emplace_back("cross_defect_cs_fiber",
                          graded_max_diff(S, string_potential(line, o.cutoff,
                                                              StringPotentialAlg::CsFiber)));
    }
    write_json_file(o.out, graded_to_json(S));
    write_graded_csv(csv_path(o.out), quantity, S, extras);
  } else if (quantity == "total-string-potential") {
    GradedForm S = total_string_potential(load_pair(o.in), o.cutoff);
    write_json_file(o.out, graded_to_json(S));
    write_graded_csv(csv_path(o.out), quantity, S, extras);
  } else if (quantity == "tau-hat") {
    GroupMap m = map_from_json(read_json_file(o.in));
    GradedForm t = tau_hat_pullback(m, o.cutoff);
    write_json_file(o.out, graded_to_json(t));
    write_graded_csv(csv_path(o.out), quantity, t, extras);
  } else if (quantity == "gerbe") {
    GerbeCurving gc = gerbe_curving_check(load_pair(o.in));
    write_json_file(o.out, json{{"B", form_to_json(gc.B)}, {"defect", gc.defect}});
    std::ofstream os(csv_path(o.out), std::ios::trunc);
    os << "quantity,degree,stat,cycle,value_re,value_im\n";
    os << "gerbe,2,sup_norm,," << sup_norm(gc.B) << ",0\n";
    os << "gerbe,,defect,," << gc.defect << ",0\n";
  } else if (quantity == "holonomy") {
    GroupMap h = higgs_holonomy_map(load_pair(o.in), o.ode_steps);
    write_json_file(o.out, map_to_json(h));
  } else {
    throw std::invalid_argument("unknown quantity '" + quantity + "'");
  }
  return 0;
}

int cmd_verify(const Options& o, const std::string& suite, bool quiet) {
  SuiteConfig cfg;
  if (!o.grid.empty()) cfg.grid = parse_grid_spec(o.grid);
  cfg.rank = o.rank;
  cfg.cutoff = o.cutoff;
  cfg.seed = o.seed;
  cfg.band = o.band;
  cfg.amplitude = o.amplitude;
  cfg.ode_steps = o.ode_steps;
  cfg.tol = o.tol;
  cfg.exact_tol = o.exact_tol;
  cfg.cutoff = o.cutoff > 0 ? o.cutoff : 2;
  auto rows = run_suite(suite, cfg);
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass();
    if (!quiet)
      std::printf("[%s] %-30s %-58s defect=%.3e tol=%.1e\n", r.pass() ? "PASS" : "FAIL",
                  r.name.c_str(), r.identity.c_str(), r.defect, r.tol);
  }
  if (!o.out.empty() && o.out != "-") write_json_file(o.out, rows_to_json(suite, cfg, rows));
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical caloron-correspondence toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "write deterministic band-limited test data");
  std::string kind = "pair", homotopy_kind = "random";
  bool unitary = false, based = false;
  int winding = 0, n_t = 33;
  gen->add_option("kind", kind, "pair | map | form | homotopy")->required();
  add_common(gen, o);
  gen->add_flag("--unitary", unitary, "values in U(n) / anti-Hermitian data");
  gen->add_flag("--based", based, "identity on the theta=0 slice");
  gen->add_option("--winding", winding, "emit the explicit phase map e^{ik theta} instead");
  gen->add_option("--homotopy-kind", homotopy_kind, "rotation | random");
  gen->add_option("--from", o.from, "input map for rotation homotopies");
  gen->add_option("--nt", n_t, "time samples for homotopies");

  auto* comp = app.add_subcommand("compute", "evaluate a characteristic or string quantity");
  std::string quantity;
  comp->add_option("quantity", quantity,
                   "chern | odd-chern | cs | string-form | string-potential | "
                   "total-string-potential | tau-hat | gerbe | holonomy")
      ->required();
  add_common(comp, o);
  comp->add_option("--in", o.in, "input file")->required();
  comp->add_option("--in2", o.in2, "second input (path endpoints)");
  comp->add_option("--algorithm", o.algorithm,
                   "algorithm selector (quantity-specific; 'both'/'all' adds cross-defects)");
  comp->add_option("--samples", o.samples, "t-samples for sampled-path algorithms");

  auto* ver = app.add_subcommand("verify", "run a named identity suite");
  std::string suite = "all";
  bool quiet = false;
  ver->add_option("--suite", suite, "calculus | caloron | chernweil | string | total | twz | all")
      ->required();
  add_common(ver, o);  // without --grid each suite picks its own default
  ver->add_flag("--quiet", quiet, "suppress per-row output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, kind, unitary, based, winding, homotopy_kind, n_t);
    if (comp->parsed()) return cmd_compute(o, quantity);
    if (ver->parsed()) return cmd_verify(o, suite, quiet);
  } catch (const std::exception& e) {
    std::cerr << error_json(e.what()).dump() << "\n";
    return 2;
  }
  return 2;
}
