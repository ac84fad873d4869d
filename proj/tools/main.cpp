#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "verify.hpp"
#include "wordseries/json_io.hpp"
#include "wordseries/wordseries.hpp"

namespace fs = std::filesystem;
using namespace wordseries;
using cli::ConfigError;
using cli::fmt;
using cli::RunConfig;
using Json = cli::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kVerifyFailure = 1, kConfigError = 2, kResonance = 3 };

class Run {
 public:
  Run(std::string command, std::string what, RunConfig cfg, std::vector<std::string> argv)
      : command_(std::move(command)), what_(std::move(what)), cfg_(std::move(cfg)), argv_(std::move(argv)) {}

  const RunConfig& cfg() const { return cfg_; }
  fs::path dir() const { return fs::path(cfg_.out); }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir());
    std::ofstream out(dir() / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir() / name).string());
    out << content;
    outputs_.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  Json& summary() { return summary_; }

  int finish(int code) {
    Json m;
    m["tool"] = "wordseries";
    m["version"] = kVersion;
    m["command"] = command_;
    if (!what_.empty()) m["what"] = what_;
    m["argv"] = argv_;
    m["config"] = cfg_.to_json();
    m["outputs"] = outputs_;
    m["summary"] = summary_;
    m["exit_code"] = code;
    fs::create_directories(dir());
    std::ofstream(dir() / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
    return code;
  }

 private:
  std::string command_, what_;
  RunConfig cfg_;
  std::vector<std::string> argv_;
  std::vector<std::string> outputs_;
  Json summary_ = Json::object();
};

AlphabetPtr fundamental_alphabet(const FrequencySpec& f) {
  std::vector<Letter> ls;
  for (std::size_t j = 0; j < f.dim(); ++j)
    for (int s : {1, -1}) {
      std::vector<int> k(f.dim(), 0);
      k[j] = s;
      ls.push_back(Letter(std::move(k)));
    }
  return Alphabet::make(std::move(ls));
}

AlphabetPtr analysis_alphabet(const RunConfig& c, const MechanicalSystem& sys) {
  return c.alphabet == "modes" ? sys.modes().alphabet() : fundamental_alphabet(sys.chart.freq);
}

std::vector<double> h_values(const RunConfig& c) {
  if (c.h) return {c.h->value};
  return build_scan_grid(c.h_min.value, c.h_max.value, c.h_points);
}

double require_h(const RunConfig& c) {
  if (!c.h) throw ConfigError("this analysis needs a single step size (--h)");
  return c.h->value;
}

Json word_row(const Word& w, const Alphabet& a, const FrequencySpec& f, Complex c) {
  const auto wf = word_frequency(w, a, f);
  return Json{{"word", to_json(w, a)}, {"n", w.size()}, {"mu", wf.mu}, {"oscillatory", !wf.is_zero},
              {"re", c.real()},        {"im", c.imag()}};
}

Json coeff_table(const CoeffMap& d, const FrequencySpec& f) {
  Json rows = Json::array();
  for (const auto& [w, c] : d.entries())
    if (!w.empty()) rows.push_back(word_row(w, d.alphabet(), f, c));
  return rows;
}

int cmd_scan(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto scheme = cli::make_scheme(c);
  const auto fa = fundamental_alphabet(sys.chart.freq);
  const auto res = detect_numerical_resonances(sys.chart.freq, *fa, 1, c.h_min.value, c.h_max.value);
  const auto h_res = res.step_sizes(1);
  const auto grid = build_scan_grid(c.h_min.value, c.h_max.value, c.h_points, h_res, c.refine);
  const auto rows = energy_error_scan(sys, scheme, grid, c.T.value, h_res);

  std::string csv = "h,steps,last_step,energy_error,nearest_resonance,resonance_distance\n";
  for (const auto& r : rows)
    csv += fmt(r.h) + "," + std::to_string(r.steps) + "," + fmt(r.last_step) + "," + fmt(r.energy_error) + "," +
           fmt(r.nearest_resonance) + "," + fmt(r.resonance_distance) + "\n";
  run.write("energy_error.csv", csv);

  Json ann = to_json(res, *fa);
  if (c.refine >= 2)
    for (auto& e : ann["resonances"]) e["local_maximum"] = has_local_maximum_near(rows, e["h"].get<double>());
  run.write_json("resonances.json", ann);

  run.summary() = Json{{"rows", rows.size()}, {"first_order_resonances", h_res.size()}};
  std::cout << "scan: " << rows.size() << " step sizes, " << h_res.size() << " first-order resonances in range\n";
  return kOk;
}

int cmd_quad_errors(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto scheme = cli::make_scheme(c);
  const auto a = analysis_alphabet(c, sys);
  const auto& f = sys.chart.freq;
  std::string csv = "word,n,mu,h,re_A,im_A,re_A_split,im_A_split,re_error,im_error\n";
  std::size_t count = 0;
  for (double h : h_values(c)) {
    const auto exact = scaled_flow_coefficients(f, a, c.N, h);
    const auto split = scale_by_length(splitting_coefficients(scheme, f, a, c.N, h).delta, h);
    for_each_word(a->size(), c.N, [&](const Word& w) {
      if (w.empty()) return;
      const Complex e = exact[w], s = split[w];
      std::string text = to_string(w, *a);
      csv += "\"" + text + "\"," + std::to_string(w.size()) + "," + fmt(word_frequency(w, *a, f).mu) + "," + fmt(h) +
             "," + fmt(e.real()) + "," + fmt(e.imag()) + "," + fmt(s.real()) + "," + fmt(s.imag()) + "," +
             fmt((s - e).real()) + "," + fmt((s - e).imag()) + "\n";
      ++count;
    });
  }
  run.write("quad_errors.csv", csv);
  run.summary() = Json{{"rows", count}};
  std::cout << "quad-errors: " << count << " rows\n";
  return kOk;
}

int cmd_resonances(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto a = analysis_alphabet(c, sys);
  Json out;
  if (c.h) {
    Json hits = Json::array();
    for (const auto& r : classify_step(sys.chart.freq, *a, c.N, c.h->value))
      hits.push_back(Json{{"k", r.k}, {"mu", r.mu}, {"order", r.order}, {"word", to_json(r.word, *a)}});
    out = Json{{"h", c.h->value}, {"resonant", hits}};
    std::cout << "resonances: " << hits.size() << " resonant frequencies at h = " << c.h->text << "\n";
  } else {
    const auto rep = detect_numerical_resonances(sys.chart.freq, *a, c.N, c.h_min.value, c.h_max.value);
    out = to_json(rep, *a);
    std::cout << "resonances: " << rep.entries.size() << " step sizes in [" << c.h_min.text << ", " << c.h_max.text
              << "]\n";
    for (const auto& e : rep.entries)
      if (e.order == 1) std::printf("  h = %.12g  order 1  mu = %.12g  j = %ld\n", e.h, e.mu, e.j);
  }
  run.write_json("resonances.json", out);
  run.summary() = Json{{"count", c.h ? out["resonant"].size() : out["resonances"].size()}};
  return kOk;
}

int cmd_normal_form(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto a = analysis_alphabet(c, sys);
  const auto& f = sys.chart.freq;
  const auto beta = base_field(a, c.N);
  const auto nf = normal_form(beta, f);
  const double residual = conjugation_residual(nf, beta, f);
  double osc = 0;
  for (const auto& [w, v] : nf.beta_hat.entries())
    if (is_oscillatory(w, *a, f)) osc = std::max(osc, std::abs(v));
  Json gens = Json::array();
  for (const auto& g : nf.generators) gens.push_back(coeff_table(g, f));
  run.write_json("normal_form.json", Json{{"N", c.N},
                                          {"residual", residual},
                                          {"max_oscillatory_beta_hat", osc},
                                          {"kappa", coeff_table(nf.kappa, f)},
                                          {"beta_hat", coeff_table(nf.beta_hat, f)},
                                          {"lambda", gens}});
  run.summary() = Json{{"residual", residual}, {"max_oscillatory_beta_hat", osc}};
  std::printf("normal-form: conjugation residual %.3e, max oscillatory coefficient %.3e\n", residual, osc);
  return residual <= c.tol.value && osc <= c.tol.value ? kOk : kVerifyFailure;
}

int cmd_modified_eq(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto a = analysis_alphabet(c, sys);
  const auto& f = sys.chart.freq;
  const auto me = modified_equation(cli::make_scheme(c), f, a, c.N, require_h(c));
  Json j{{"h", me.h}, {"N", me.n_max}, {"min_denominator", me.min_denominator}};
  if (me.closest_word) j["closest_word"] = to_json(*me.closest_word, *a);
  j["beta_tilde"] = coeff_table(me.beta_tilde, f);
  run.write_json("modified_equation.json", j);
  run.summary() = Json{{"min_denominator", me.min_denominator}, {"words", me.beta_tilde.support_size()}};
  for (std::size_t l = 0; l < a->size(); ++l) {
    const Complex b = me.beta_tilde[Word{LetterId(l)}];
    std::printf("beta~[%s] = %.17g %+.3e i\n", to_string(a->letter(l)).c_str(), b.real(), b.imag());
  }
  return kOk;
}

int cmd_processor(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto a = analysis_alphabet(c, sys);
  const auto& f = sys.chart.freq;
  const auto mode = c.processor == "full" ? ProcessorMode::full : ProcessorMode::first_order;
  const auto p = processor(cli::make_scheme(c), f, a, c.N, require_h(c), mode);
  std::vector<double> osc_max(c.N + 1, 0.0), nonosc_max(c.N + 1, 0.0);
  for (const auto& [w, v] : p.local_error.delta.entries()) {
    if (w.empty()) continue;
    auto& slot = is_oscillatory(w, *a, f) ? osc_max : nonosc_max;
    slot[w.size()] = std::max(slot[w.size()], std::abs(v));
  }
  run.write_json("processor.json", Json{{"mode", c.processor},
                                        {"h", require_h(c)},
                                        {"N", c.N},
                                        {"kappa", coeff_table(p.kappa, f)},
                                        {"processed_error", coeff_table(p.local_error.delta, f)},
                                        {"max_oscillatory_error_by_length", osc_max},
                                        {"max_nonoscillatory_error_by_length", nonosc_max}});
  run.summary() = Json{{"max_oscillatory_error_by_length", osc_max}};
  for (std::size_t n = 1; n <= c.N; ++n)
    std::printf("processor(%s): length %zu  oscillatory %.3e  nonoscillatory %.3e\n", c.processor.c_str(), n,
                osc_max[n], nonosc_max[n]);
  return kOk;
}

int cmd_local_error(Run& run) {
  const auto& c = run.cfg();
  const auto sys = cli::make_system(c.system);
  const auto a = analysis_alphabet(c, sys);
  const auto& f = sys.chart.freq;
  const auto scheme = cli::make_scheme(c);
  const double h = require_h(c);
  const auto le = local_error_coefficients(scheme, f, a, c.N, h);
  Json j{{"h", h}, {"N", c.N}, {"vector_part", to_json(le.v)}, {"coefficients", coeff_table(le.delta, f)}};
  const auto ms = m_step_error_coefficients(scheme, f, a, h, c.m);
  Json terms = Json::array();
  for (const auto& t : ms.terms)
    terms.push_back(Json{{"letter", to_json(a->letter(t.letter))},
                         {"mu", t.mu},
                         {"oscillatory", t.oscillatory},
                         {"resonant", t.resonant},
                         {"predicted", complex_pair(t.predicted)},
                         {"composed", complex_pair(t.composed)}});
  j["m_step"] = Json{{"m", c.m}, {"terms", terms}, {"max_discrepancy", ms.max_discrepancy}};
  run.write_json("local_error.json", j);
  run.summary() = Json{{"max_abs", le.delta.norm_inf()}, {"m_step_discrepancy", ms.max_discrepancy}};
  std::printf("local-error: max coefficient %.3e, %zu-step prediction discrepancy %.3e\n", le.delta.norm_inf(), c.m,
              ms.max_discrepancy);
  return kOk;
}

int cmd_verify(Run& run, bool full) {
  cli::Verifier v(run.cfg().seed, full);
  const auto r = v.run();
  Json checks = Json::array();
  std::printf("%-12s %-48s %12s %10s  %s\n", "suite", "check", "value", "tol", "result");
  for (const auto& ch : r.checks) {
    std::printf("%-12s %-48s %12.3e %10.1e  %s\n", ch.suite.c_str(), ch.name.c_str(), ch.value, ch.tol,
                ch.passed() ? "PASS" : "FAIL");
    checks.push_back(Json{{"suite", ch.suite}, {"check", ch.name}, {"value", ch.value}, {"tol", ch.tol},
                          {"passed", ch.passed()}});
  }
  std::printf("%s: %s\n", r.level.c_str(), r.ok() ? "all checks passed" : "FAILURES");
  run.write_json("verify.json", Json{{"level", r.level}, {"seed", r.seed}, {"checks", checks}, {"ok", r.ok()}});
  run.summary() = Json{{"ok", r.ok()}, {"checks", r.checks.size()}, {"seconds", r.seconds}};
  return r.ok() ? kOk : kVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Word-series analysis of splitting integrators for perturbed oscillators"};
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, system, scheme, out;
  std::string h, h_min, h_max, T, tol;
  std::size_t N = 0, h_points = 0, seed = 0;
  app.add_option("--config", config_path, "TOML or JSON configuration (or a run manifest)");
  app.add_option("--system", system, "fpu5 | forced_oscillator(omega,F) | cubic_quartic(omega,eps)");
  app.add_option("--scheme", scheme, "strang | lie_trotter | composition8 | a=..;b=..");
  app.add_option("--N", N, "maximum word length");
  app.add_option("--h", h, "step size");
  app.add_option("--h-min", h_min, "smallest step size");
  app.add_option("--h-max", h_max, "largest step size");
  app.add_option("--h-points", h_points, "number of step sizes");
  app.add_option("--T", T, "final time");
  app.add_option("--out", out, "output directory");
  app.add_option("--tol", tol, "tolerance");
  app.add_option("--seed", seed, "random seed");

  auto* scan = app.add_subcommand("scan", "energy error at time T over a grid of step sizes");
  auto* analyze = app.add_subcommand("analyze", "coefficient-level analyses");
  std::string what;
  analyze->add_option("what", what, "quad-errors | resonances | normal-form | modified-eq | processor | local-error")
      ->required()
      ->check(CLI::IsMember({"quad-errors", "resonances", "normal-form", "modified-eq", "processor", "local-error"}));
  auto* verify = app.add_subcommand("verify", "property suites with pass/fail matrix");
  std::string level = "fast";
  verify->add_option("level", level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
  for (auto* s : {scan, analyze, verify}) {
    s->set_help_flag("--help", "print help");
    s->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  std::string command = scan->parsed() ? "scan" : analyze->parsed() ? "analyze" : "verify";
  try {
    if (!config_path.empty()) cli::load_file(cfg, config_path);
    if (app.count("--system")) cfg.system = system;
    if (app.count("--scheme")) cli::parse_scheme_flag(cfg, scheme);
    if (app.count("--N")) cfg.N = N;
    if (app.count("--h")) cfg.h = cli::Number::parse(h, "h");
    if (app.count("--h-min")) cfg.h_min = cli::Number::parse(h_min, "h-min");
    if (app.count("--h-max")) cfg.h_max = cli::Number::parse(h_max, "h-max");
    if (app.count("--h-points")) cfg.h_points = h_points;
    if (app.count("--T")) cfg.T = cli::Number::parse(T, "T");
    if (app.count("--out")) cfg.out = out;
    if (app.count("--tol")) cfg.tol = cli::Number::parse(tol, "tol");
    if (app.count("--seed")) cfg.seed = seed;
    cli::validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  Run run(command, command == "analyze" ? what : command == "verify" ? level : "", cfg, args);
  try {
    if (command == "scan") return run.finish(cmd_scan(run));
    if (command == "verify") return run.finish(cmd_verify(run, level == "full"));
    if (what == "quad-errors") return run.finish(cmd_quad_errors(run));
    if (what == "resonances") return run.finish(cmd_resonances(run));
    if (what == "normal-form") return run.finish(cmd_normal_form(run));
    if (what == "modified-eq") return run.finish(cmd_modified_eq(run));
    if (what == "processor") return run.finish(cmd_processor(run));
    return run.finish(cmd_local_error(run));
  } catch (const ResonanceError& e) {
    const auto sys = cli::make_system(cfg.system);
    run.write_json("resonance.json", to_json(e, *analysis_alphabet(cfg, sys)));
    std::cerr << "resonance: " << e.what() << "\n";
    return run.finish(kResonance);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return run.finish(kConfigError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return run.finish(kVerifyFailure);
  }
}
