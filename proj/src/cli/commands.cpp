#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fermibag/cli.hpp"
#include "fermibag/errors.hpp"
#include "fermibag/fock_oracle.hpp"
#include "fermibag/perturbation.hpp"
#include "output.hpp"

namespace fermibag::cli {

namespace {

namespace fs = std::filesystem;
using detail::Cell;
using detail::CsvTable;

std::string metadata(const std::string& command, const Json& doc) {
  return std::string("fermibag ") + kVersion + " command=" + command + " config=" + doc.dump();
}

std::size_t worker_count() {
  const char* env = std::getenv("FERMIBAG_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    throw InvalidArgument("FERMIBAG_THREADS must be a positive integer, got '" +
                          std::string(env) + "'");
  }
  return static_cast<std::size_t>(n);
}

double drive_strength(const DriveSpec& drive) {
  if (drive.is_off()) return 0.0;
  if (const auto* imp = std::get_if<ImpulsiveDrive>(&drive.variant())) return imp->g;
  throw InvalidArgument("compact formulas need an impulsive drive (or none)");
}

TransitionResult evaluate(FormulaTag tag, const TransitionSpec& spec, double t) {
  auto compact = [&](CompactKind kind) {
    if (!(spec.final == BosonState::vacuum())) {
      throw UnsupportedStatePair("compact formulas describe transitions into the vacuum");
    }
    return compact_probability(kind, spec.initial, drive_strength(spec.drive), t, spec.cfg,
                               spec.k, spec.k_prime);
  };
  switch (tag) {
    case FormulaTag::General: return probability_general(spec, t);
    case FormulaTag::Resonant: return probability_resonant(spec, t);
    case FormulaTag::Fock: return probability_fock(spec, t);
    case FormulaTag::FockNoDrive: return probability_fock_nodrive(spec, t);
    case FormulaTag::VacuumDrive: return probability_vacuum_drive(spec, t);
    case FormulaTag::ScNoDrive: return probability_sc_nodrive(spec, t);
    case FormulaTag::CompactF: return compact(CompactKind::F);
    case FormulaTag::CompactC: return compact(CompactKind::C);
    case FormulaTag::CompactS: return compact(CompactKind::S);
    case FormulaTag::CompactSC: return compact(CompactKind::SC);
    case FormulaTag::Dyson1: return probability_dyson1(spec, t);
    case FormulaTag::Oracle: break;
  }
  throw InvalidArgument("formula 'oracle' is produced by the evolve command");
}

void warn_config(const CavityConfig& cfg, std::ostream& log) {
  for (const auto& w : config_warnings(cfg)) log << "warning: " << w << "\n";
}

std::vector<fs::path> cmd_spectrum(const Json& doc, const fs::path& out, std::ostream&) {
  const CavityConfig cfg = cavity_from(doc);
  CsvTable table{metadata("spectrum", doc), {"n", "omega"}, {}};
  for (int n = 0; n < cfg.n_fermion_modes; ++n) {
    table.rows.push_back({Cell(long(n)), Cell(mode_frequency(n, cfg.length))});
  }
  const fs::path path = out / "spectrum.csv";
  detail::write_text(path, detail::render_csv(table));
  return {path};
}

CsvTable amplitude_table(const GroundStateCorrection& gsc, const std::string& meta) {
  CsvTable table{meta, {"n", "m", "coefficient"}, {}};
  for (int n = 0; n < gsc.cutoff; ++n) {
    for (int m = 0; m < gsc.cutoff; ++m) {
      const double a = gsc.amplitude(n, m);
      if (a != 0.0) table.rows.push_back({Cell(long(n)), Cell(long(m)), Cell(a)});
    }
  }
  return table;
}

std::vector<fs::path> cmd_ground_state(const Json& doc, const fs::path& out, std::ostream& log) {
  const std::string meta = metadata("ground-state", doc);
  std::vector<fs::path> written;
  CsvTable summary{meta, {"wall", "norm_z", "delta_e", "purity"}, {}};

  if (doc.contains("multibag")) {
    const MultiBagConfig multi = multibag_from(doc);
    warn_config(multi.base, log);
    const auto tables = ground_state_correction_multi(multi);
    const auto shift = vacuum_energy_shift_multi(multi);
    for (std::size_t l = 0; l < tables.size(); ++l) {
      const fs::path path = out / ("ground_state_wall" + std::to_string(l) + ".csv");
      detail::write_text(path, detail::render_csv(amplitude_table(tables[l], meta)));
      written.push_back(path);
      summary.rows.push_back({Cell(long(l)), Cell(tables[l].norm_z),
                              Cell(shift.per_oscillator[l]),
                              Cell(boson_reduced_purity(tables[l]))});
    }
    summary.rows.push_back({Cell(), Cell(), Cell(shift.delta_e), Cell()});
    log << "delta_e (all walls) = " << format_double(shift.delta_e) << "\n";
  } else {
    const CavityConfig cfg = cavity_from(doc);
    warn_config(cfg, log);
    const auto gsc = ground_state_correction(cfg);
    const auto shift = vacuum_energy_shift(cfg);
    const fs::path path = out / "ground_state.csv";
    detail::write_text(path, detail::render_csv(amplitude_table(gsc, meta)));
    written.push_back(path);
    const double purity = boson_reduced_purity(gsc);
    summary.rows.push_back({Cell(0L), Cell(gsc.norm_z), Cell(shift.delta_e), Cell(purity)});
    log << "Z = " << format_double(gsc.norm_z) << "\n"
        << "delta_e = " << format_double(shift.delta_e) << "\n"
        << "purity = " << format_double(purity) << "\n";
  }
  const fs::path path = out / "ground_state_summary.csv";
  detail::write_text(path, detail::render_csv(summary));
  written.push_back(path);
  return written;
}

std::string g_label(double g) {
  std::ostringstream s;
  s << g;
  return s.str();
}

std::vector<fs::path> cmd_figure1(const Json& doc, const fs::path& out, std::ostream&) {
  const auto grid = phonon_grid_from(doc);
  const auto gs = doc.at("sweep").at("g").get<std::vector<double>>();
  const bool plots = doc.at("output").at("plots").get<bool>();
  const std::size_t threads = worker_count();
  std::vector<fs::path> written;
  for (double g : gs) {
    const auto rows = sweep_figure1(g, grid, threads);
    CsvTable table{metadata("figure1", doc) + " g=" + g_label(g),
                   {"N_phon", "gamma_F", "gamma_C", "gamma_S", "gamma_SC"},
                   {}};
    for (const auto& r : rows) {
      table.rows.push_back({Cell(r.n_phon), detail::cell(r.gamma_f), Cell(r.gamma_c), Cell(r.gamma_s),
                            Cell(r.gamma_sc)});
    }
    const std::string stem = "figure1_g" + g_label(g);
    const fs::path path = out / (stem + ".csv");
    detail::write_text(path, detail::render_csv(table));
    written.push_back(path);

    if (plots) {
      std::vector<detail::PlotSeries> series(4);
      series[0].label = "Gamma_F";
      series[1].label = "Gamma_C";
      series[2].label = "Gamma_S";
      series[3].label = "Gamma_SC";
      for (const auto& r : rows) {
        if (r.gamma_f) {
          series[0].x.push_back(r.n_phon);
          series[0].y.push_back(*r.gamma_f);
        }
        const double ys[] = {r.gamma_c, r.gamma_s, r.gamma_sc};
        for (int k = 0; k < 3; ++k) {
          series[k + 1].x.push_back(r.n_phon);
          series[k + 1].y.push_back(ys[k]);
        }
      }
      const fs::path svg = out / (stem + ".svg");
      detail::write_text(svg, detail::render_svg("g = " + g_label(g), "N_phon", series));
      written.push_back(svg);
    }
  }
  return written;
}

std::vector<fs::path> cmd_transition(const Json& doc, const fs::path& out, std::ostream& log) {
  const TransitionSpec spec = transition_from(doc);
  warn_config(spec.cfg, log);
  const FormulaTag tag = formula_tag_from_string(doc.at("transition").at("formula"));
  CsvTable table{metadata("transition", doc), {"t", "probability"}, {}};
  bool clamped = false;
  for (double t : time_grid_from(doc)) {
    const auto r = evaluate(tag, spec, t);
    clamped = clamped || r.clamped;
    table.rows.push_back({Cell(t), Cell(r.probability)});
  }
  if (clamped) log << "warning: probability clamped to 1; perturbation theory has broken down\n";
  const fs::path path = out / "transition.csv";
  detail::write_text(path, detail::render_csv(table));
  return {path};
}

std::vector<fs::path> cmd_evolve(const Json& doc, const fs::path& out, std::ostream& log) {
  const TransitionSpec spec = transition_from(doc);
  warn_config(spec.cfg, log);
  const FormulaTag tag = formula_tag_from_string(doc.at("transition").at("formula"));
  const Json& o = doc.at("oracle");
  const int n_b = o.at("n_boson_levels").get<int>();
  const int samples = o.at("n_samples").get<int>();
  const double t_final = o.at("t_final").get<double>();
  const int steps = o.at("steps").get<int>();
  if (samples < 2 || steps < 1 || !(t_final > 0.0)) {
    throw InvalidArgument("config: oracle: need n_samples >= 2, steps >= 1, t_final > 0");
  }
  // Round the step count up so that every sample falls on a step boundary.
  const int intervals = samples - 1;
  const int stride = (steps + intervals - 1) / intervals;

  const HilbertSpace space = build_space(n_b, spec.cfg.n_fermion_modes);
  const std::uint32_t pair_bits =
      (1u << space.particle_bit(spec.k)) | (1u << space.antiparticle_bit(spec.k_prime));
  const StateVector psi0 = space.product_state(spec.initial);
  const StateVector target = space.product_state(spec.final, pair_bits);

  CsvTable table{metadata("evolve", doc), {"t", "P_exact", "P_formula", "abs_diff", "norm"}, {}};
  bool clamped = false;
  const Propagator prop(space, spec.cfg, spec.drive);
  prop.run(psi0, t_final, stride * intervals, [&](int step, double t, const StateVector& psi) {
    if (step % stride != 0) return;
    const double exact = std::norm(target.dot(psi));
    const auto formula = evaluate(tag, spec, t);
    clamped = clamped || formula.clamped;
    table.rows.push_back({Cell(t), Cell(exact), Cell(formula.probability),
                          Cell(std::abs(exact - formula.probability)), Cell(psi.norm())});
  });
  if (clamped) log << "warning: formula probability clamped to 1\n";
  const fs::path path = out / "evolve.csv";
  detail::write_text(path, detail::render_csv(table));
  return {path};
}

}  // namespace

std::vector<fs::path> execute(const std::string& command, const Json& scenario,
                              const fs::path& out_dir, std::ostream& log) {
  fs::create_directories(out_dir);
  if (command == "spectrum") return cmd_spectrum(scenario, out_dir, log);
  if (command == "ground-state") return cmd_ground_state(scenario, out_dir, log);
  if (command == "figure1") return cmd_figure1(scenario, out_dir, log);
  if (command == "transition") return cmd_transition(scenario, out_dir, log);
  if (command == "evolve") return cmd_evolve(scenario, out_dir, log);
  throw InvalidArgument("unknown command '" + command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fermion pair creation in a bag with a vibrating wall", "fermibag"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  for (const char* name : {"spectrum", "ground-state", "figure1", "transition", "evolve"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "scenario JSON file")->required();
    sub->add_option("--set", overrides, "override a config value, e.g. cavity.epsilon=0.005");
    sub->add_option("--out", out_dir, "output directory (default: current directory)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Json scenario = load_scenario(config, overrides);
    for (const auto& path : execute(command, scenario, out_dir, err)) {
      out << path.string() << "\n";
    }
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const Json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kValidationError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace fermibag::cli
