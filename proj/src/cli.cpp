#include "pep/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pep/baseline.hpp"
#include "pep/certify.hpp"
#include "pep/diagnostics.hpp"
#include "pep/homotopy.hpp"
#include "pep/problems.hpp"
#include "pep/report.hpp"

namespace pep::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string command;
  std::string input;
  std::string family;
  std::vector<std::size_t> dims{10};
  std::size_t degree = 2;
  int scale_exponent = 0;
  double zeta_re = 1.0;
  double zeta_im = 0.0;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  int threads = 0;
  double tol = 1e-12;
  std::string weights = "rel";
  std::string method = "homotopy";
  std::string mu_variant = "corollary";
  std::string out;
  bool gamma_off = false;
  bool strict = false;
  bool certify_columns = false;
  bool summary = false;
};

// Input or generator failure, mapped to exit code 2.
struct InputError {
  std::string message;
};

struct Instance {
  std::string family;
  std::uint64_t seed = 0;
  std::optional<MatrixPolynomial> p;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt_bool(bool v) { return v ? "true" : "false"; }

WeightMode weight_mode(const Options& o) { return o.weights == "abs" ? WeightMode::Absolute : WeightMode::Relative; }
MuVariant mu_variant(const Options& o) {
  return o.mu_variant == "degree-weighted" ? MuVariant::DegreeWeighted : MuVariant::Corollary;
}

MatrixPolynomial generate(const Options& o, std::size_t n, std::uint64_t seed) {
  if (o.family == "random-qep") return random_pep(2, n, seed);
  if (o.family == "random-pep") return random_pep(o.degree, n, seed);
  if (o.family == "damped") return damped_family(n, o.scale_exponent, seed);
  if (o.family == "acoustic") return acoustic_wave_qep(n, cplx(o.zeta_re, o.zeta_im));
  throw InputError{"unknown family " + o.family};
}

std::vector<Instance> load_instances(const Options& o) {
  if (o.input.empty() == o.family.empty()) throw InputError{"give exactly one of --input or --family"};
  if (o.seeds == 0) throw InputError{"--seeds must be >= 1"};
  std::vector<Instance> out;
  try {
    if (!o.input.empty()) {
      for (std::size_t s = 0; s < o.seeds; ++s) {
        Instance inst{"input", o.seed + s, parse_problem_file(o.input)};
        out.push_back(std::move(inst));
      }
      return out;
    }
    for (std::size_t n : o.dims) {
      for (std::size_t s = 0; s < o.seeds; ++s) {
        Instance inst{o.family, o.seed + s, generate(o, n, o.seed + s)};
        out.push_back(std::move(inst));
      }
    }
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  return out;
}

TrackerConfig tracker_config(const Options& o) {
  TrackerConfig c;
  c.final_tolerance = o.tol;
  if (o.gamma_off) {
    c.gamma_trick = false;
    c.gamma = 1.0;
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  return c;
}

// Everything reported about one candidate eigenpair.
struct Row {
  cplx lambda = kNaN;
  double abs_berr = kNaN;
  double rel_berr = kNaN;
  double cond = kNaN;
  std::optional<CertificationReport> cert;
  std::string status;
  bool duplicate = false;
  bool failed = false;
};

double safe_berr(const MatrixPolynomial& p, std::span<const cplx> x, cplx lambda, const BackwardErrorWeights& w) {
  if (!all_finite(x) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) return kNaN;
  try {
    return backward_error(p, x, lambda, w);
  } catch (const Error&) {
    return kNaN;
  }
}

double safe_cond(const MatrixPolynomial& p, std::span<const cplx> x, cplx lambda, const ConditionWeights& w) {
  try {
    const ComplexVector y = left_eigenvector(p, lambda);
    return condition_number(p, HomogeneousPoint::from_affine(lambda), x, y, w);
  } catch (const Error& e) {
    return e.kind() == ErrorKind::ZeroDenominator ? std::numeric_limits<double>::infinity() : kNaN;
  }
}

std::optional<CertificationReport> safe_certify(const MatrixPolynomial& p, const AffineChart& chart,
                                                const SolutionPoint& z, MuVariant variant) {
  try {
    return certify(p, chart, z, variant);
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Diagnostics {
  BackwardErrorWeights abs_w;
  BackwardErrorWeights rel_w;
  ConditionWeights cond_w;
  MuVariant variant;

  Diagnostics(const MatrixPolynomial& p, const Options& o)
      : abs_w(BackwardErrorWeights::absolute(p.degree())),
        rel_w(BackwardErrorWeights::relative(p)),
        cond_w(ConditionWeights::make(p, weight_mode(o))),
        variant(mu_variant(o)) {}
};

Row converged_row(const MatrixPolynomial& p, const Diagnostics& d, const Eigenpair& e, const AffineChart& chart,
                  const std::optional<SolutionPoint>& terminal, std::string status) {
  Row r;
  r.lambda = e.lambda;
  r.abs_berr = safe_berr(p, e.x, e.lambda, d.abs_w);
  r.rel_berr = safe_berr(p, e.x, e.lambda, d.rel_w);
  r.cond = safe_cond(p, e.x, e.lambda, d.cond_w);
  if (terminal) {
    r.cert = safe_certify(p, chart, *terminal, d.variant);
  } else {
    try {
      r.cert = safe_certify(p, chart, project_to_chart(chart, e.x, e.lambda), d.variant);
    } catch (const Error&) {
    }
  }
  r.status = std::move(status);
  r.duplicate = e.duplicate;
  return r;
}

Row failed_row(const MatrixPolynomial& p, const Diagnostics& d, const PathOutcome& o) {
  Row r;
  r.lambda = o.terminal.lambda;
  r.abs_berr = safe_berr(p, o.terminal.x, o.terminal.lambda, d.abs_w);
  r.rel_berr = safe_berr(p, o.terminal.x, o.terminal.lambda, d.rel_w);
  r.status = std::string(to_string(o.status));
  r.failed = true;
  return r;
}

struct MethodRun {
  Method method;
  SolveResult result;
  std::vector<Row> rows;
  double seconds = 0.0;
  bool path_failure = false;
};

MethodRun run_method(const MatrixPolynomial& p, Method method, std::uint64_t seed, const Options& o) {
  MethodRun run{method, {}, {}, 0.0, false};
  const Diagnostics diag(p, o);
  const auto t0 = std::chrono::steady_clock::now();
  if (method == Method::Homotopy) {
    run.result = solve_homotopy(p, seed, tracker_config(o), o.threads);
  } else {
    LinearizationOptions lo;
    lo.block_weights = weight_mode(o);
    lo.threads = o.threads;
    lo.seed = seed;
    run.result = solve_linearization(p, lo);
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const SolveResult& res = run.result;
  for (const Eigenpair& e : res.eigenpairs) {
    std::optional<SolutionPoint> terminal;
    std::string status = "linearized";
    if (e.path_index) {
      terminal = res.paths[*e.path_index].terminal;
      status = std::string(to_string(res.paths[*e.path_index].status));
    }
    run.rows.push_back(converged_row(p, diag, e, res.chart, terminal, status));
    if (e.duplicate) run.path_failure = true;
  }
  for (const PathOutcome& path : res.paths) {
    if (path.status == PathStatus::Converged) continue;
    run.rows.push_back(failed_row(p, diag, path));
    run.path_failure = true;
  }
  if (method == Method::Linearization && res.eigenpairs.size() != p.eigenvalue_count()) run.path_failure = true;
  return run;
}

std::vector<std::string> pair_header(bool cert_columns) {
  std::vector<std::string> h{"family",   "n",        "degree", "seed",        "method",    "index",
                             "lambda_re", "lambda_im", "abs_berr", "rel_berr", "cond", "alpha_upper",
                             "certified", "status",    "duplicate"};
  if (cert_columns) {
    for (const char* c : {"beta", "mu", "gamma_upper", "degenerate"}) h.emplace_back(c);
  }
  return h;
}

std::vector<std::string> instance_fields(const Instance& inst) {
  return {inst.family, fmt(inst.p->dim()), fmt(inst.p->degree()), std::to_string(inst.seed)};
}

void write_pair_rows(CsvWriter& csv, const Instance& inst, const MethodRun& run, bool cert_columns) {
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    const Row& r = run.rows[i];
    std::vector<std::string> f = instance_fields(inst);
    const bool certified = r.cert && r.cert->certified;
    for (std::string s : {std::string(to_string(run.method)), fmt(i), fmt(r.lambda.real()), fmt(r.lambda.imag()),
                          fmt(r.abs_berr), fmt(r.rel_berr), fmt(r.cond), fmt(r.cert ? r.cert->alpha_upper : kNaN),
                          fmt_bool(certified), r.status, fmt_bool(r.duplicate)}) {
      f.push_back(std::move(s));
    }
    if (cert_columns) {
      f.push_back(fmt(r.cert ? r.cert->beta : kNaN));
      f.push_back(fmt(r.cert ? r.cert->mu : kNaN));
      f.push_back(fmt(r.cert ? r.cert->gamma_upper : kNaN));
      f.push_back(fmt_bool(r.cert && r.cert->degenerate));
    }
    csv.row(f);
  }
}

std::vector<std::string> summary_header() {
  return {"family",    "n",           "degree",        "seed",         "method",      "pairs",
          "converged", "failed",      "duplicates",    "certified",    "mean_abs_berr", "mean_rel_berr",
          "max_rel_berr", "max_alpha", "seconds"};
}

void write_summary_row(CsvWriter& csv, const Instance& inst, const MethodRun& run) {
  std::size_t good = 0, failed = 0, dups = 0, certified = 0;
  double sum_abs = 0.0, sum_rel = 0.0, max_rel = 0.0, max_alpha = 0.0;
  for (const Row& r : run.rows) {
    if (r.failed) {
      ++failed;
      continue;
    }
    ++good;
    dups += r.duplicate;
    certified += r.cert && r.cert->certified;
    sum_abs += r.abs_berr;
    sum_rel += r.rel_berr;
    max_rel = std::max(max_rel, r.rel_berr);
    max_alpha = std::max(max_alpha, r.cert ? r.cert->alpha_upper : std::numeric_limits<double>::infinity());
  }
  const double cnt = good ? static_cast<double>(good) : kNaN;
  std::vector<std::string> f = instance_fields(inst);
  for (std::string s : {std::string(to_string(run.method)), fmt(run.rows.size()), fmt(good), fmt(failed), fmt(dups),
                        fmt(certified), fmt(sum_abs / cnt), fmt(sum_rel / cnt), fmt(max_rel), fmt(max_alpha),
                        fmt(run.seconds)}) {
    f.push_back(std::move(s));
  }
  csv.row(f);
}

std::vector<std::string> compare_header() {
  return {"family",      "n",           "degree",       "seed",         "index",        "lambda_re",
          "lambda_im",   "abs_berr",    "rel_berr",     "cond",         "alpha_upper",  "certified",
          "status",      "lin_lambda_re", "lin_lambda_im", "match_distance", "lin_abs_berr", "lin_rel_berr",
          "kappa_pep",   "kappa_gep",   "rho"};
}

void write_compare_rows(CsvWriter& csv, const Instance& inst, const MethodRun& hom, const MethodRun& lin) {
  const MatrixPolynomial& p = *inst.p;
  const GepPencil pencil = companion_gep(p);
  const double rho_value = rho(p);

  std::vector<cplx> a, b;
  for (const Row& r : hom.rows) a.push_back(r.lambda);
  for (const Row& r : lin.rows) b.push_back(r.lambda);
  const auto match = match_nearest(a, b);
  std::vector<bool> used(b.size(), false);

  auto kappa_gep = [&](cplx lambda) {
    try {
      return gep_condition_number(pencil, lambda);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::ZeroDenominator ? std::numeric_limits<double>::infinity() : kNaN;
    }
  };

  std::size_t index = 0;
  for (std::size_t i = 0; i < hom.rows.size(); ++i) {
    const Row& h = hom.rows[i];
    std::vector<std::string> f = instance_fields(inst);
    const bool certified = h.cert && h.cert->certified;
    for (std::string s : {fmt(index++), fmt(h.lambda.real()), fmt(h.lambda.imag()), fmt(h.abs_berr), fmt(h.rel_berr),
                          fmt(h.cond), fmt(h.cert ? h.cert->alpha_upper : kNaN), fmt_bool(certified), h.status}) {
      f.push_back(std::move(s));
    }
    if (match[i]) {
      const Row& l = lin.rows[*match[i]];
      used[*match[i]] = true;
      for (std::string s : {fmt(l.lambda.real()), fmt(l.lambda.imag()), fmt(std::abs(l.lambda - h.lambda)),
                            fmt(l.abs_berr), fmt(l.rel_berr)}) {
        f.push_back(std::move(s));
      }
    } else {
      for (int k = 0; k < 5; ++k) f.push_back(fmt(kNaN));
    }
    f.push_back(fmt(h.cond));
    f.push_back(fmt(h.failed ? kNaN : kappa_gep(h.lambda)));
    f.push_back(fmt(rho_value));
    csv.row(f);
  }
  // Baseline eigenvalues nothing on the homotopy side matched.
  for (std::size_t j = 0; j < lin.rows.size(); ++j) {
    if (used[j]) continue;
    const Row& l = lin.rows[j];
    std::vector<std::string> f = instance_fields(inst);
    for (std::string s : {fmt(index++), fmt(kNaN), fmt(kNaN), fmt(kNaN), fmt(kNaN), fmt(kNaN), fmt(kNaN),
                          fmt_bool(false), std::string("unmatched"), fmt(l.lambda.real()), fmt(l.lambda.imag()),
                          fmt(kNaN), fmt(l.abs_berr), fmt(l.rel_berr), fmt(l.cond), fmt(kappa_gep(l.lambda)),
                          fmt(rho_value)}) {
      f.push_back(std::move(s));
    }
    csv.row(f);
  }
}

void add_common(CLI::App* sub, Options& o, bool sweep) {
  sub->add_option("--input", o.input, "problem file (JSON)");
  sub->add_option("--family", o.family, "generated problem family")
      ->check(CLI::IsMember({"random-qep", "random-pep", "damped", "acoustic"}));
  sub->add_option("--n", o.dims, sweep ? "problem sizes to sweep" : "problem size")->check(CLI::PositiveNumber);
  sub->add_option("--degree", o.degree, "degree for random-pep")->check(CLI::PositiveNumber);
  sub->add_option("--k", o.scale_exponent, "damped family: C is scaled by 2^k");
  sub->add_option("--zeta", o.zeta_re, "acoustic impedance (real part)");
  sub->add_option("--zeta-im", o.zeta_im, "acoustic impedance (imaginary part)");
  sub->add_option("--seed", o.seed, "seed (first seed of a sweep)");
  sub->add_option("--seeds", o.seeds, "number of consecutive seeds");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", o.tol, "final refinement tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--weights", o.weights, "condition-number weights")->check(CLI::IsMember({"abs", "rel"}));
  sub->add_option("--mu", o.mu_variant, "mu bound used for certification")
      ->check(CLI::IsMember({"corollary", "degree-weighted"}));
  sub->add_flag("--gamma-off", o.gamma_off, "use gamma = 1");
  sub->add_flag("--strict", o.strict, "exit 4 when any path fails");
  sub->add_option("--out", o.out, "CSV output file (default stdout)");
}

int execute(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<Instance> instances;
  std::unique_ptr<std::ofstream> file;
  try {
    instances = load_instances(o);
    tracker_config(o);
  } catch (const InputError& e) {
    err << "pepsolve: " << e.message << "\n";
    return kExitInput;
  }
  if (!o.out.empty()) {
    file = std::make_unique<std::ofstream>(o.out, std::ios::binary);
    if (!*file) {
      err << "pepsolve: cannot write " << o.out << "\n";
      return kExitInput;
    }
  }
  std::ostream& sink = file ? static_cast<std::ostream&>(*file) : out;
  CsvWriter csv(sink);

  std::vector<Method> methods;
  if (o.command == "compare" || o.method == "both") {
    methods = {Method::Homotopy, Method::Linearization};
  } else {
    methods = {o.method == "linearization" ? Method::Linearization : Method::Homotopy};
  }
  const bool cert_columns = o.command == "certify" || o.certify_columns;
  if (o.summary) {
    csv.header(summary_header());
  } else if (o.command == "compare") {
    csv.header(compare_header());
  } else {
    csv.header(pair_header(cert_columns));
  }

  bool failure = false;
  try {
    for (const Instance& inst : instances) {
      std::vector<MethodRun> runs;
      for (Method m : methods) runs.push_back(run_method(*inst.p, m, inst.seed, o));
      for (const MethodRun& r : runs) failure = failure || r.path_failure;
      if (o.summary) {
        for (const MethodRun& r : runs) write_summary_row(csv, inst, r);
      } else if (o.command == "compare") {
        write_compare_rows(csv, inst, runs[0], runs[1]);
      } else {
        for (const MethodRun& r : runs) write_pair_rows(csv, inst, r, cert_columns);
      }
    }
  } catch (const InputError& e) {
    err << "pepsolve: " << e.message << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    sink.flush();
    err << "pepsolve: solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  sink.flush();
  if (failure) {
    err << "pepsolve: some paths failed or were flagged as duplicates\n";
    if (o.strict) return kExitStrict;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Polynomial eigenvalue solver (homotopy continuation and companion linearization)", "pepsolve"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "solve one or more problems, one CSV row per eigenpair");
  CLI::App* cert = app.add_subcommand("certify", "solve and add alpha-theory columns");
  CLI::App* compare = app.add_subcommand("compare", "homotopy and linearization side by side");
  CLI::App* bench = app.add_subcommand("bench", "sweep a problem family over sizes and seeds");
  for (CLI::App* sub : {solve, cert, compare, bench}) add_common(sub, o, sub == bench);
  for (CLI::App* sub : {solve, cert}) {
    sub->add_option("--method", o.method, "solver")->check(CLI::IsMember({"homotopy", "linearization"}));
  }
  bench->add_option("--method", o.method, "solver")->check(CLI::IsMember({"homotopy", "linearization", "both"}));
  solve->add_flag("--certify", o.certify_columns, "add beta, mu, gamma columns");
  bench->add_flag("--certify", o.certify_columns, "add beta, mu, gamma columns");
  bench->add_flag("--summary", o.summary, "one row per instance and method");
  compare->add_flag("--summary", o.summary, "one row per instance and method");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pepsolve: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kExitInput;
  }
  o.command = app.get_subcommands().front()->get_name();
  return execute(o, out, err);
}

}  // namespace pep::cli
