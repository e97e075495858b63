#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "thf/diagnostics.hpp"
#include "thf/errors.hpp"
#include "thf/io.hpp"
#include "thf/laguerre.hpp"
#include "thf/outer.hpp"
#include "thf/spectra.hpp"

namespace thf::cli {
namespace {

using nlohmann::json;

// Either a measure document or a coefficient CSV.
struct Input {
  std::optional<Measure> measure;
  std::optional<CoefficientSequence> coeffs;
};

Input load_input(const std::string& path) {
  if (path.empty()) throw ValidationError("--input is required for this command");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  Input out;
  if (first != std::string::npos && text[first] == '{') {
    out.measure = io::parse_measure_text(text);
  } else {
    std::istringstream csv(text);
    out.coeffs = io::read_coefficients_csv(csv);
  }
  return out;
}

Measure require_measure(const Input& in, const char* command) {
  if (!in.measure) throw ValidationError(std::string(command) + " needs a measure JSON input");
  return *in.measure;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + ": cannot parse number '" + s + "'");
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (v < 0 || v != std::floor(v) || v > 1e9) throw ValidationError(what + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// "e3", "random:16", "geom:0.5:16", or a comma list whose entries are "re" or "re:im".
FiniteVector parse_f(const std::string& spec, std::uint64_t seed) {
  if (spec.empty()) throw ValidationError("--f: empty vector spec");
  if (spec[0] == 'e') return FiniteVector::basis(parse_count(spec.substr(1), "--f"));
  if (spec.rfind("random:", 0) == 0) {
    const std::size_t len = parse_count(spec.substr(7), "--f");
    if (len == 0) throw ValidationError("--f: random length must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> f(len);
    for (auto& v : f) {
      const double re = g(rng);
      v = cplx(re, g(rng));
    }
    return FiniteVector(std::move(f));
  }
  if (spec.rfind("geom:", 0) == 0) {
    const auto parts = split(spec.substr(5), ':');
    if (parts.size() != 2) throw ValidationError("--f: expected geom:RHO:LEN");
    return FiniteVector::geometric(parse_number(parts[0], "--f"), parse_count(parts[1], "--f"));
  }
  std::vector<cplx> f;
  for (const auto& item : split(spec, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) f.emplace_back(parse_number(parts[0], "--f"), 0.0);
    else if (parts.size() == 2) f.emplace_back(parse_number(parts[0], "--f"), parse_number(parts[1], "--f"));
    else throw ValidationError("--f: bad entry '" + item + "'");
  }
  return FiniteVector(std::move(f));
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0) || !(c.tol <= 1e-2)) throw ValidationError("--tol must lie in (0, 1e-2]");
  if (c.n_max > 65536) throw ValidationError("--n-max must not exceed 65536");
  if (c.section_size == 0 || c.section_size > 65536) throw ValidationError("--section-size must lie in [1, 65536]");
  if (!(c.radius > 0.0) || !(c.radius < 1.0)) throw ValidationError("--radius must lie in (0, 1)");
  if (c.points == 0 || c.points > 100000) throw ValidationError("--points must lie in [1, 100000]");
  if (c.format != "json" && c.format != "table") throw ValidationError("--format must be json or table");
}

std::string fmt(double v) { return io::format_double(v); }

std::string run_moments(const RunConfig& c) {
  const Measure m = require_measure(load_input(c.input), "moments");
  std::ostringstream out;
  io::write_coefficients_csv(out, from_measure(m, c.n_max));
  return out.str();
}

std::string run_form_eval(const RunConfig& c) {
  const Input in = load_input(c.input);
  const FiniteVector f = parse_f(c.f, c.seed);
  json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["f"] = c.f;
  doc["len"] = f.size();
  if (in.measure) {
    doc["form_direct"] = form_direct(from_measure(*in.measure, f.size()), f);
    doc["form_via_measure"] = form_via_measure(*in.measure, f);
  } else {
    doc["form_direct"] = form_direct(*in.coeffs, f);
  }
  return doc.dump(2) + "\n";
}

CoefficientSequence section_coefficients(const Input& in, std::size_t n) {
  if (in.measure) return from_measure(*in.measure, n);
  return *in.coeffs;
}

std::string run_section_spectrum(const RunConfig& c) {
  const Input in = load_input(c.input);
  const SpectralReport r = extreme_eigs(section_coefficients(in, c.section_size), c.section_size, c.tol, c.seed);
  return io::to_json(r).dump(2) + "\n";
}

std::string run_diagnose(const RunConfig& c) {
  const Measure m = require_measure(load_input(c.input), "diagnose");
  DiagnosticOptions opts;
  opts.tol = c.tol;
  opts.seed = c.seed;
  opts.norm_sections = c.sections;
  std::vector<std::pair<std::string, DiagnosticReport>> reports;
  if (const auto* circle = std::get_if<CircleMeasure>(&m)) {
    reports.emplace_back("closability", toeplitz_closable(*circle, opts));
  } else {
    const auto& line = std::get<LineMeasure>(m);
    reports.emplace_back("closability", hankel_closable(line, opts));
    if (line.support().a >= -1.0 && line.support().b <= 1.0) {
      reports.emplace_back("boundedness", widom_boundedness(line, opts));
    }
  }
  bool overall = true;
  for (const auto& [name, r] : reports) overall = overall && r.overall;

  if (c.format == "table") {
    std::ostringstream out;
    for (const auto& [name, r] : reports) out << "[" << name << "]\n" << io::render_table(r) << "\n";
    out << "overall: " << (overall ? "yes" : "no") << "\n";
    return out.str();
  }
  json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["overall"] = overall;
  for (const auto& [name, r] : reports) doc["reports"][name] = io::to_json(r);
  return doc.dump(2) + "\n";
}

std::string run_outer(const RunConfig& c) {
  const Measure m = require_measure(load_input(c.input), "outer");
  const auto* circle = std::get_if<CircleMeasure>(&m);
  if (!circle) throw ValidationError("outer needs a circle measure");
  const OuterFunction outer(circle->density());
  std::vector<double> thetas(c.points);
  std::size_t q = 0;
  for (std::size_t j = 0; j < c.points; ++j) {
    thetas[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c.points);
    q = std::max(q, outer.quadrature_order(std::polar(c.radius, thetas[j])));
  }
  const auto samples = outer.sample(q);
  std::ostringstream out;
  out << "# schema_version=" << io::kSchemaVersion << "\n";
  out << "theta,outer_modulus_sq,density\n";
  for (double th : thetas) {
    out << fmt(th) << "," << fmt(std::norm(outer.evaluate(std::polar(c.radius, th), samples))) << ","
        << fmt(circle->density()(th)) << "\n";
  }
  return out.str();
}

std::string run_bridge_check(const RunConfig& c) {
  const FiniteVector f = parse_f(c.f, c.seed);
  const std::vector<double> grid = parse_grid(c.grid);
  const BridgeReport r = bridge_residual(f, grid);
  json doc = io::to_json(r);
  doc["f_spec"] = c.f;
  doc["lambda_grid"] = grid;
  return doc.dump(2) + "\n";
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file " + c.output);
  file << text;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double lo = parse_number(parts[1], "--grid");
    const double hi = parse_number(parts[2], "--grid");
    const std::size_t n = parse_count(parts[3], "--grid");
    if (parts[0] == "log") return log_grid(lo, hi, n);
    if (!(hi >= lo) || n < 2) throw ValidationError("--grid: lin grid needs lo <= hi and count >= 2");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
  }
  std::vector<double> g;
  for (const auto& item : split(spec, ',')) g.push_back(parse_number(item, "--grid"));
  if (g.empty()) throw ValidationError("--grid: empty grid");
  return g;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::string text;
    switch (config.command) {
      case Command::moments: text = run_moments(config); break;
      case Command::form_eval: text = run_form_eval(config); break;
      case Command::section_spectrum: text = run_section_spectrum(config); break;
      case Command::diagnose: text = run_diagnose(config); break;
      case Command::outer: text = run_outer(config); break;
      case Command::bridge_check: text = run_bridge_check(config); break;
    }
    emit(config, text, out);
    return kOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    try {
      json partial = io::to_json(e.best_estimate());
      partial["partial"] = true;
      emit(config, partial.dump(2) + "\n", out);
    } catch (const std::exception&) {
    }
    return kNonConvergence;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semibounded Toeplitz and Hankel forms: moments, sections, diagnostics, outer functions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "measure JSON or coefficient CSV");
    sub->add_option("--output", cfg.output, "output file (default: stdout)");
    sub->add_option("--tol", cfg.tol, "relative tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for stochastic paths")->capture_default_str();
  };
  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"moments", "write moment coefficients as CSV", Command::moments},
      {"form-eval", "evaluate the quadratic form at a finite vector", Command::form_eval},
      {"section-spectrum", "extreme eigenvalues of an N x N section", Command::section_spectrum},
      {"diagnose", "closability and boundedness criteria", Command::diagnose},
      {"outer", "outer function modulus near the circle (CSV)", Command::outer},
      {"bridge-check", "Laguerre-Laplace bridge residual", Command::bridge_check},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    common(sub);
    const Command cmd = e.command;
    sub->callback([&cfg, cmd] { cfg.command = cmd; });
    switch (cmd) {
      case Command::moments:
        sub->add_option("--n-max", cfg.n_max, "highest Toeplitz index (Hankel: 2 n_max)")->capture_default_str();
        break;
      case Command::form_eval:
        sub->add_option("--f", cfg.f, "e<n>, random:<len>, geom:<rho>:<len>, or re[:im],...")->capture_default_str();
        break;
      case Command::section_spectrum:
        sub->add_option("--section-size", cfg.section_size, "section size N")->capture_default_str();
        break;
      case Command::diagnose:
        sub->add_option("--sections", cfg.sections, "norm-growth section sizes")->delimiter(',');
        sub->add_option("--format", cfg.format, "json or table")->capture_default_str();
        break;
      case Command::outer:
        sub->add_option("--radius", cfg.radius, "evaluation radius r < 1")->capture_default_str();
        sub->add_option("--points", cfg.points, "equispaced angles")->capture_default_str();
        break;
      case Command::bridge_check:
        sub->add_option("--f", cfg.f, "e<n>, random:<len>, geom:<rho>:<len>, or re[:im],...")->capture_default_str();
        sub->add_option("--grid", cfg.grid, "log:lo:hi:count, lin:lo:hi:count, or a comma list")
            ->capture_default_str();
        break;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return run(cfg, out, err);
}

}  // namespace thf::cli
