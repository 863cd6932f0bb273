#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flockwave/characterize.hpp"
#include "flockwave/error.hpp"
#include "flockwave/spec_io.hpp"
#include "flockwave/spectrum.hpp"
#include "flockwave/stability.hpp"
#include "flockwave/sweep.hpp"

namespace fs = std::filesystem;
using namespace flockwave;

namespace {

constexpr const char* kVersion = FLOCKWAVE_VERSION;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

struct Options {
  std::string input;
  std::optional<int> N;
  std::optional<std::string> boundary;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<double> tol;
  std::optional<int> samples;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string trajectory;
};

std::string describe(const Options& o) {
  std::ostringstream s;
  if (o.N) s << " N=" << *o.N;
  if (o.boundary) s << " boundary=" << *o.boundary;
  if (o.t_max) s << " t_max=" << *o.t_max;
  if (o.dt) s << " dt=" << *o.dt;
  if (o.tol) s << " tol=" << *o.tol;
  if (o.samples) s << " samples=" << *o.samples;
  if (o.seed) s << " seed=" << *o.seed;
  if (!o.mode.empty()) s << " mode=" << o.mode;
  const auto text = s.str();
  return text.empty() ? "(defaults)" : text.substr(1);
}

class CsvFile {
 public:
  CsvFile(const Options& o, const std::string& name, std::string_view subcommand,
          std::string_view source_text, const std::vector<std::string>& extra = {}) {
    fs::create_directories(o.out);
    path_ = (fs::path(o.out) / name).string();
    out_.open(path_);
    if (!out_) throw Error("io", "cannot write " + path_);
    out_ << std::setprecision(17);
    out_ << "# tool: flockwave " << kVersion << "\n";
    out_ << "# command: " << subcommand << "\n";
    out_ << "# spec_hash: fnv1a64:" << hex(fnv1a(source_text)) << "\n";
    out_ << "# options: " << describe(o) << "\n";
    for (const auto& line : extra) out_ << "# " << line << "\n";
  }
  std::ofstream& stream() { return out_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

FlockSpec load_with_overrides(const Options& o, std::string& text) {
  text = read_text_file(o.input);
  auto spec = parse_spec(text);
  if (o.N) spec.N = *o.N;
  if (o.boundary) spec.boundary = boundary_from_string(*o.boundary);
  check_spec(spec);
  return spec;
}

std::optional<Classification> try_classify(const ReducedParams& p) {
  if (!(velocity_discriminant(p) > 0.0)) return std::nullopt;
  return classify(signal_velocities(p));
}

double default_horizon(const FlockSpec& spec) {
  const auto cls = try_classify(reduce(spec.config));
  const double N = spec.N;
  if (cls && cls->type == SolutionType::TypeI) {
    return N / cls->c_plus + 1.25 * 2.0 * N * (1.0 / cls->c_plus - 1.0 / cls->c_minus);
  }
  if (cls && cls->type == SolutionType::TypeII) return 1.25 * N / cls->c_minus;
  return 10.0 * N;
}

IntegratorOptions integrator_options(const Options& o, const FlockSpec& spec) {
  IntegratorOptions opts;
  if (o.dt) {
    opts.method = IntegratorMethod::RungeKutta4;
    opts.dt = *o.dt;
  }
  if (o.tol) opts.abs_tol = opts.rel_tol = *o.tol;
  opts.t_max = o.t_max ? *o.t_max : default_horizon(spec);
  if (o.samples) opts.output_interval = opts.t_max / *o.samples;
  if (opts.method == IntegratorMethod::RungeKutta4 && opts.output_interval == 0.0) {
    // Keep the output grid on whole steps for bit-identical reruns.
    const double stride = std::max(1.0, std::round(opts.effective_output_interval() / opts.dt));
    opts.output_interval = stride * opts.dt;
  }
  opts.check();
  return opts;
}

std::string integrator_line(const IntegratorOptions& opts) {
  std::ostringstream s;
  s << "integrator: " << to_string(opts.method);
  if (opts.method == IntegratorMethod::RungeKutta4) {
    s << " dt=" << opts.dt;
  } else {
    s << " abs_tol=" << opts.abs_tol << " rel_tol=" << opts.rel_tol;
  }
  s << " t_max=" << opts.t_max << " output_interval=" << opts.effective_output_interval();
  return s.str();
}

// validate ------------------------------------------------------------------

int run_validate(const Options& o) {
  const auto text = read_text_file(o.input);
  const auto spec = parse_spec_document(text);
  const auto report = validate_config(spec.config);
  if (report.valid()) {
    std::cout << "valid: rho_0 = 1 and row sums vanish for rho_x and rho_v\n";
    return 0;
  }
  for (const auto& v : report.violations) {
    std::cout << "invalid: " << v.field << " " << v.constraint << " residual " << std::setprecision(17)
              << v.residual << (v.exact ? " (exact)" : "") << "\n";
  }
  return 1;
}

// spectrum ------------------------------------------------------------------

int run_spectrum(const Options& o) {
  const auto text = read_text_file(o.input);
  const auto spec = parse_spec(text);
  const auto p = reduce(spec.config);
  const int samples = o.samples.value_or(kDefaultCurveSamples);
  const auto curves = eigencurves(p, samples);
  CsvFile csv(o, "spectrum.csv", "spectrum", text);
  auto& f = csv.stream();
  f << "m,phi,re_lambda_x,im_lambda_x,re_lambda_v,im_lambda_v,re_nu_plus,im_nu_plus,re_nu_minus,"
       "im_nu_minus\n";
  for (std::size_t m = 0; m < curves.samples.size(); ++m) {
    const auto& s = curves.samples[m];
    f << m << ',' << s.phi << ',' << s.lambda_x.real() << ',' << s.lambda_x.imag() << ','
      << s.lambda_v.real() << ',' << s.lambda_v.imag() << ',' << s.nu_plus.real() << ','
      << s.nu_plus.imag() << ',' << s.nu_minus.real() << ',' << s.nu_minus.imag() << '\n';
  }
  std::cout << std::setprecision(10);
  std::cout << "samples: " << samples << "\n";
  std::cout << "spectral margin (max Re nu, phi != 0): " << curves.spectral_margin << "\n";
  const double D = velocity_discriminant(p);
  std::cout << "discriminant D: " << D << "\n";
  if (D > 0.0) {
    const auto b = low_freq_expansion(p);
    std::cout << "B1+ " << b.B1_plus << "  B1- " << b.B1_minus << "  B2+ " << b.B2_plus << "  B2- "
              << b.B2_minus << "\n";
    const auto v = signal_velocities(p);
    std::cout << "c+ " << v.c_plus << "  c- " << v.c_minus << "\n";
  }
  std::cout << "wrote " << csv.path() << "\n";
  return 0;
}

// classify ------------------------------------------------------------------

int run_classify(const Options& o) {
  const auto text = read_text_file(o.input);
  auto spec = parse_spec(text);
  const auto p = reduce(spec.config);
  const auto criteria = necessary_criteria(p, spec.config);
  const int samples = o.samples.value_or(kDefaultCurveSamples);
  const double margin = circle_spectral_margin(p, samples);

  std::cout << std::setprecision(10);
  std::cout << "condition  satisfied  value            formula\n";
  for (const auto& c : criteria.conditions) {
    std::cout << std::left << std::setw(11) << c.id << std::setw(11) << (c.satisfied ? "yes" : "no")
              << std::setw(17) << c.value << c.formula << "\n";
  }
  std::cout << "all criteria: " << (criteria.overall ? "pass" : "fail") << "\n";
  std::cout << "circle spectral margin (" << samples << " samples): " << margin << "\n";

  std::optional<Classification> cls;
  if (velocity_discriminant(p) >= 0.0) {
    const auto v = signal_velocities(p);
    cls = classify(v);
    std::cout << "c+ = " << v.c_plus << "\nc- = " << v.c_minus << "\n";
    std::cout << "type: " << to_string(cls->type);
    if (cls->type == SolutionType::TypeI) std::cout << (cls->attenuating ? " (attenuating)" : " (amplifying)");
    std::cout << "\n";
  } else {
    std::cout << "type: none (negative discriminant, condition (v) fails)\n";
  }

  std::optional<EigenReport> eig;
  if (o.N) {
    spec.N = *o.N;
    if (o.boundary) spec.boundary = boundary_from_string(*o.boundary);
    eig = line_eigen_stability(build_system(spec));
    std::cout << "line system N=" << eig->N << " " << to_string(eig->boundary)
              << ": max Re = " << eig->max_real << ", verdict " << to_string(eig->verdict) << "\n";
  }

  CsvFile csv(o, "classify.csv", "classify", text);
  auto& f = csv.stream();
  f << "item,value,satisfied,margin\n";
  for (const auto& c : criteria.conditions) {
    f << "condition_" << c.id << ',' << c.value << ',' << (c.satisfied ? 1 : 0) << ',' << c.margin << '\n';
  }
  f << "criteria_overall,," << (criteria.overall ? 1 : 0) << ",\n";
  f << "circle_margin," << margin << ',' << (margin < 0.0 ? 1 : 0) << ",\n";
  if (cls) {
    f << "c_plus," << cls->c_plus << ",,\n";
    f << "c_minus," << cls->c_minus << ",,\n";
    f << "type," << to_string(cls->type) << ",,\n";
  }
  if (eig) {
    f << "line_max_real," << eig->max_real << ',' << (eig->verdict == Verdict::Stable ? 1 : 0) << ",\n";
    f << "line_verdict," << to_string(eig->verdict) << ",,\n";
  }
  return 0;
}

// simulate ------------------------------------------------------------------

int run_simulate(const Options& o) {
  std::string text;
  const auto spec = load_with_overrides(o, text);
  const auto opts = integrator_options(o, spec);
  const auto tr = integrate(spec, opts);
  const bool relative = o.mode == "relative";
  std::vector<std::string> meta{integrator_line(opts),
                                "N: " + std::to_string(spec.N),
                                "boundary: " + std::string(to_string(spec.boundary)),
                                "truncated: " + std::string(tr.truncated ? "yes " + tr.truncation_reason : "no")};
  CsvFile csv(o, "trajectory.csv", "simulate", text, meta);
  auto& f = csv.stream();
  f << 't';
  for (int k = 1; k <= tr.N; ++k) f << (relative ? ",x_" : ",z_") << k;
  if (!relative) {
    for (int k = 1; k <= tr.N; ++k) f << ",zdot_" << k;
  }
  f << '\n';
  const auto rel = relative ? relative_positions(tr) : std::vector<double>{};
  const auto n = static_cast<std::size_t>(tr.N);
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    f << tr.times[i];
    if (relative) {
      for (std::size_t k = 0; k < n; ++k) f << ',' << rel[i * n + k];
    } else {
      for (double z : tr.positions(i)) f << ',' << z;
      for (double v : tr.velocities(i)) f << ',' << v;
    }
    f << '\n';
  }
  std::cout << "wrote " << csv.path() << " (" << tr.samples() << " samples"
            << (tr.truncated ? ", truncated: " + tr.truncation_reason : "") << ")\n";
  return tr.truncated ? 3 : 0;
}

// characterize --------------------------------------------------------------

// Reads t and the last-agent column from a trajectory CSV written by simulate.
Signal read_signal(const std::string& path, const FlockSpec& spec) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::string line;
  std::vector<std::string> header;
  Signal s;
  s.N = spec.N;
  s.v0 = spec.v0;
  int column = -1;
  bool relative = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "z_" + std::to_string(spec.N)) column = static_cast<int>(i);
        if (header[i] == "x_" + std::to_string(spec.N)) {
          column = static_cast<int>(i);
          relative = true;
        }
      }
      if (header.empty() || header[0] != "t" || column < 0) {
        throw Error("characterize", path + ": expected columns t and z_" + std::to_string(spec.N) +
                                        " or x_" + std::to_string(spec.N));
      }
      continue;
    }
    if (static_cast<int>(cells.size()) <= column) throw Error("characterize", path + ": short row");
    const double t = std::stod(cells[0]);
    const double value = std::stod(cells[static_cast<std::size_t>(column)]);
    s.t.push_back(t);
    s.d.push_back(relative ? value + spec.N * spec.delta : value - spec.v0 * t);
  }
  return s;
}

int run_characterize(const Options& o) {
  std::string text;
  const auto spec = load_with_overrides(o, text);
  const auto p = reduce(spec.config);
  const auto v = signal_velocities(p);
  const auto cls = classify(v);
  Signal signal;
  std::vector<std::string> meta{"N: " + std::to_string(spec.N),
                                "boundary: " + std::string(to_string(spec.boundary))};
  if (!o.trajectory.empty()) {
    signal = read_signal(o.trajectory, spec);
    meta.push_back("trajectory: " + o.trajectory);
  } else {
    const auto opts = integrator_options(o, spec);
    signal = trace_last_agent(spec, opts);
    meta.push_back(integrator_line(opts));
  }

  struct Row {
    std::string name;
    double predicted;
    double measured;
  };
  std::vector<Row> rows;
  std::vector<std::string> diagnostics;
  std::ostringstream diag;
  diag << std::setprecision(10);
  if (cls.type == SolutionType::TypeI) {
    const auto pred = predict_type1(v, spec.N, spec.v0);
    const auto m = measure_type1(signal);
    rows = {{"A1", std::abs(pred.amplitudes[0]), std::abs(m.amplitudes[0])},
            {"alpha", pred.attenuation, m.attenuation},
            {"T", pred.period, m.period}};
    diag << "extrema:";
    for (const auto& e : m.extrema) diag << " (" << e.t << ", " << e.value << ")";
    diag << "; zero crossings:";
    for (double c : m.crossings) diag << ' ' << c;
    diag << "; period from extrema " << m.period_from_extrema;
  } else if (cls.type == SolutionType::TypeII) {
    const auto pred = predict_type2(v, spec.N, spec.v0);
    const auto m = measure_type2(signal, pred);
    rows = {{"A", std::abs(pred.amplitude), std::abs(m.amplitude)},
            {"T1", pred.T1, m.T1},
            {"T2", pred.T2, m.T2}};
    diag << "t_min " << m.t_min << "; ramp slope " << m.ramp_slope << " over " << m.ramp_points
         << " samples; blind fit breakpoints " << m.blind_fit.b1 << ", " << m.blind_fit.b2
         << " rms " << m.blind_fit.rms;
    if (m.seeded_fit) {
      diag << "; seeded fit breakpoints " << m.seeded_fit->b1 << ", " << m.seeded_fit->b2 << " rms "
           << m.seeded_fit->rms;
    }
  } else {
    throw Error("characterize", "no quantitative descriptors for solution type " +
                                    std::string(to_string(cls.type)));
  }
  meta.push_back("type: " + std::string(to_string(cls.type)));
  meta.push_back("diagnostics: " + diag.str());

  CsvFile csv(o, "characterize.csv", "characterize", text, meta);
  auto& f = csv.stream();
  f << "descriptor,predicted,measured,relative_error\n";
  std::cout << std::setprecision(6);
  std::cout << "type " << to_string(cls.type) << "\n";
  std::cout << std::left << std::setw(12) << "descriptor" << std::setw(14) << "predicted"
            << std::setw(14) << "measured"
            << "relative error\n";
  for (const auto& r : rows) {
    const double err = relative_error(r.measured, r.predicted);
    f << r.name << ',' << r.predicted << ',' << r.measured << ',' << err << '\n';
    std::cout << std::setw(12) << r.name << std::setw(14) << r.predicted << std::setw(14)
              << r.measured << err << "\n";
  }
  std::cout << diag.str() << "\n";
  return 0;
}

// sweep ---------------------------------------------------------------------

std::string_view descriptor_name(SolutionType t, std::size_t k) {
  return t == SolutionType::TypeI ? kType1Descriptors[k] : kType2Descriptors[k];
}

int run_sweep(const Options& o) {
  const auto text = read_text_file(o.input);
  auto plan = parse_plan(text);
  if (o.seed) plan.seed = *o.seed;
  if (o.samples) plan.samples = static_cast<std::size_t>(*o.samples);
  if (o.tol) plan.tolerance = *o.tol;
  if (o.boundary) plan.boundaries = {boundary_from_string(*o.boundary)};
  const std::string mode = o.mode.empty() ? "scaling" : o.mode;
  const std::string plan_text = serialize_plan(plan);
  const int threads = default_threads();
  std::cout << "threads: " << threads << "\n";

  if (mode == "compare" || mode == "both") {
    const auto universe = generate_configurations(plan);
    const int N = o.N.value_or(plan.check_N);
    const auto boundary = plan.boundaries.front();
    const auto report = compare_sets(universe, N, boundary, plan.escalation, threads);
    CsvFile csv(o, "discrepancies.csv", "sweep", plan_text,
                {"universe: " + std::to_string(report.universe),
                 "criteria_pass: " + std::to_string(report.criteria_count),
                 "eigen_stable_N" + std::to_string(N) + ": " + std::to_string(report.eigen_count),
                 "boundary: " + std::string(to_string(boundary))});
    auto& f = csv.stream();
    f << "config_id,criteria_pass,circle_margin,status,eigen_stable_by_N\n";
    for (const auto& d : report.entries) {
      f << d.id << ',' << (d.criteria_pass ? 1 : 0) << ',' << d.circle_margin << ','
        << to_string(d.status) << ',';
      for (std::size_t i = 0; i < d.eigen_stable.size(); ++i) {
        f << (i ? ";" : "") << d.eigen_stable[i].first << ':' << (d.eigen_stable[i].second ? 1 : 0);
      }
      f << '\n';
    }
    std::cout << "P_C " << report.criteria_count << ", P_S " << report.eigen_count
              << " of " << report.universe << "; discrepancies: "
              << report.count(DiscrepancyStatus::Persistent) << " persistent, "
              << report.count(DiscrepancyStatus::Counterexample) << " counterexample-class, "
              << report.count(DiscrepancyStatus::Resolved) << " resolved\n";
    std::cout << "wrote " << csv.path() << "\n";
  }

  if (mode == "scaling" || mode == "both") {
    const auto pool = build_pool(plan);
    std::cout << "pool: " << pool.members.size() << " configs from " << pool.candidates_drawn
              << " candidates\n";
    const auto records =
        error_scaling_experiment(pool.members, plan.ladder(), plan.boundaries, plan.tolerance, threads);
    {
      CsvFile csv(o, "records.csv", "sweep", plan_text);
      auto& f = csv.stream();
      f << "config_id,type,N,boundary,ok,descriptor,predicted,measured,relative_error,wall_seconds,failure\n";
      for (const auto& r : records) {
        for (std::size_t k = 0; k < 3; ++k) {
          f << r.config_id << ',' << to_string(r.type) << ',' << r.N << ',' << to_string(r.boundary)
            << ',' << (r.ok ? 1 : 0) << ',' << descriptor_name(r.type, k) << ',' << r.predicted[k]
            << ',' << r.measured[k] << ',' << r.errors[k] << ',' << r.wall_seconds << ",\""
            << r.failure << "\"\n";
        }
      }
      std::cout << "wrote " << csv.path() << "\n";
    }
    const auto aggregates = aggregate(records);
    {
      CsvFile csv(o, "aggregates.csv", "sweep", plan_text);
      auto& f = csv.stream();
      f << "type,boundary,N,count,failed,descriptor,mean_relative_error,max_relative_error\n";
      for (const auto& a : aggregates) {
        for (std::size_t k = 0; k < 3; ++k) {
          f << to_string(a.type) << ',' << to_string(a.boundary) << ',' << a.N << ',' << a.count
            << ',' << a.failed << ',' << descriptor_name(a.type, k) << ',' << a.mean[k] << ','
            << a.max[k] << '\n';
        }
      }
      std::cout << "wrote " << csv.path() << "\n";
    }
    {
      CsvFile csv(o, "slopes.csv", "sweep", plan_text);
      auto& f = csv.stream();
      f << "type,boundary,descriptor,loglog_slope\n";
      for (const auto& s : fit_slopes(aggregates)) {
        f << to_string(s.type) << ',' << to_string(s.boundary) << ',' << descriptor_name(s.type, s.descriptor)
          << ',';
        if (s.slope) f << *s.slope;
        f << '\n';
        std::cout << "slope " << to_string(s.type) << ' ' << to_string(s.boundary) << ' '
                  << descriptor_name(s.type, s.descriptor) << ": "
                  << (s.slope ? std::to_string(*s.slope) : std::string("n/a")) << "\n";
      }
    }
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& o, const char* input_help) {
  cmd->add_option("input", o.input, input_help)->required();
  cmd->add_option("--out", o.out, "output directory");
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--N", o.N, "number of followers")->check(CLI::Range(5, 1 << 20));
  cmd->add_option("--boundary", o.boundary, "fixed_interaction | fixed_mass | periodic")
      ->check(CLI::IsMember({"fixed_interaction", "fixed_mass", "periodic"}));
  cmd->add_option("--t-max", o.t_max, "simulation horizon")->check(CLI::PositiveNumber);
  auto* dt = cmd->add_option("--dt", o.dt, "fixed-step RK4 with this step")->check(CLI::PositiveNumber);
  auto* tol = cmd->add_option("--tol", o.tol, "adaptive 4/5 tolerance (abs = rel)")->check(CLI::PositiveNumber);
  dt->excludes(tol);
  cmd->add_option("--samples", o.samples, "number of output samples")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flock dynamics toolkit for second-order agents with next-nearest-neighbour coupling"};
  app.set_version_flag("--version", std::string("flockwave ") + kVersion);
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check rho_0 = 1 and vanishing row sums");
  validate->add_option("input", o.input, "spec file (JSON)")->required();

  auto* spectrum = app.add_subcommand("spectrum", "circle eigencurves and signal velocities");
  add_common(spectrum, o, "spec file (JSON)");
  spectrum->add_option("--samples", o.samples, "wave numbers on the circle")->check(CLI::Range(kMinCurveSamples, 1 << 22));

  auto* classify_cmd = app.add_subcommand("classify", "necessary criteria, type and optional eigen check");
  add_common(classify_cmd, o, "spec file (JSON)");
  classify_cmd->add_option("--samples", o.samples, "wave numbers for the circle margin")->check(CLI::Range(kMinCurveSamples, 1 << 22));
  classify_cmd->add_option("--N", o.N, "run the dense eigensolve at this size")->check(CLI::Range(5, kDenseEigenCeiling));
  classify_cmd->add_option("--boundary", o.boundary, "boundary kind for the eigensolve")
      ->check(CLI::IsMember({"fixed_interaction", "fixed_mass", "periodic"}));

  auto* simulate = app.add_subcommand("simulate", "integrate the line system from rest");
  add_common(simulate, o, "spec file (JSON)");
  add_run_options(simulate, o);
  simulate->add_option("--mode", o.mode, "absolute (z, zdot) or relative (x_k - v0 t)")
      ->check(CLI::IsMember({"absolute", "relative"}));

  auto* characterize = app.add_subcommand("characterize", "predicted vs measured transient descriptors");
  add_common(characterize, o, "spec file (JSON)");
  add_run_options(characterize, o);
  characterize->add_option("--trajectory", o.trajectory, "trajectory CSV from simulate (simulates when omitted)");

  auto* sweep = app.add_subcommand("sweep", "error-scaling ladder and P_C vs P_S comparison");
  add_common(sweep, o, "sweep plan (JSON)");
  sweep->add_option("--seed", o.seed, "override the plan seed");
  sweep->add_option("--samples", o.samples, "random configurations for the comparison")->check(CLI::PositiveNumber);
  sweep->add_option("--N", o.N, "eigen check size for the comparison")->check(CLI::Range(5, kDenseEigenCeiling));
  sweep->add_option("--tol", o.tol, "integrator tolerance")->check(CLI::PositiveNumber);
  sweep->add_option("--boundary", o.boundary, "restrict to one boundary kind")
      ->check(CLI::IsMember({"fixed_interaction", "fixed_mass"}));
  sweep->add_option("--mode", o.mode, "scaling | compare | both")->check(CLI::IsMember({"scaling", "compare", "both"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(o);
    if (spectrum->parsed()) return run_spectrum(o);
    if (classify_cmd->parsed()) return run_classify(o);
    if (simulate->parsed()) return run_simulate(o);
    if (characterize->parsed()) return run_characterize(o);
    if (sweep->parsed()) return run_sweep(o);
  } catch (const Error& e) {
    std::cerr << "error: " << nlohmann::json{{"module", e.module()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << nlohmann::json{{"module", "cli"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
