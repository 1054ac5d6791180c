#include "kw/cli.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "kw/duality.hpp"
#include "kw/spec_io.hpp"
#include "kw/weyl.hpp"

namespace kw::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::ParseError:
      return kExitParse;
    case Errc::IoError:
      return kExitIo;
    case Errc::InvalidMeasure:
    case Errc::CommonAtom:
    case Errc::Indefinite:
      return kExitValidation;
    default:
      return kExitSuiteFail;
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string regime_name(QRegime r) {
  switch (r) {
    case QRegime::RegularClosedForm: return "regular";
    case QRegime::LimitCircleClosedForm: return "limit-circle";
    case QRegime::LimitPointNested: return "limit-point";
  }
  return "?";
}

std::string classification_line(const Classification& c) {
  std::string s = c.regular() ? "Regular" : "Singular";
  s += c.limit_circle() ? ", LimitCircle" : ", LimitPoint";
  return s;
}

IntegralSystem load_validated(const std::string& path) {
  SystemSpec spec = load_system_spec(path);
  return IntegralSystem::validate(spec.r1, spec.r2);
}

int thread_budget() {
  if (const char* env = std::getenv("KW_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct QRow {
  Complex lambda;
  bool ok = false;
  QEnclosure q;
  std::string error;
};

QRow evaluate_q(const IntegralSystem& sys, Complex lambda, double tol, int budget) {
  QRow row;
  row.lambda = lambda;
  try {
    row.q = principal_q(sys, lambda, tol, budget);
    row.ok = true;
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

void print_witnesses(const Classification& c, std::ostream& out) {
  out << "  1  in L2(R2): " << (c.one_in_l2.finite ? "finite " + fmt17(c.one_in_l2.value)
                                                   : std::string("infinite"))
      << "\n";
  out << "  R1 in L2(R2): " << (c.r1_in_l2.finite ? "finite " + fmt17(c.r1_in_l2.value)
                                                  : std::string("infinite"))
      << "\n";
}

int cmd_validate(const std::string& path, std::ostream& out) {
  IntegralSystem sys = load_validated(path);
  Classification c = classify(sys);
  out << "valid: " << classification_line(c) << "\n";
  out << "  b       = ";
  if (std::isinf(sys.endpoint())) out << "inf";
  else out << fmt17(sys.endpoint());
  out << "\n";
  out << "  R1(b)   = " << fmt17(sys.r1().total_variation()) << "\n";
  out << "  R2(b)   = " << fmt17(sys.r2().total_variation()) << "\n";
  print_witnesses(c, out);
  return kExitOk;
}

int cmd_classify(const std::string& path, std::ostream& out) {
  IntegralSystem sys = load_validated(path);
  Classification c = classify(sys);
  out << classification_line(c) << "\n";
  print_witnesses(c, out);
  return kExitOk;
}

int cmd_q(const std::string& path, const std::vector<std::string>& lambdas, double tol,
          int budget, std::ostream& out) {
  IntegralSystem sys = load_validated(path);
  out << "lambda_re,lambda_im,q_re,q_im,err_radius,regime\n";
  std::size_t failures = 0;
  for (const std::string& text : lambdas) {
    Complex lam;
    try {
      lam = parse_complex(text);
    } catch (const Error& e) {
      out << text << ",,,,,error: " << e.what() << "\n";
      ++failures;
      continue;
    }
    QRow row = evaluate_q(sys, lam, tol, budget);
    out << fmt17(lam.real()) << "," << fmt17(lam.imag()) << ",";
    if (row.ok) {
      out << fmt17(row.q.value.real()) << "," << fmt17(row.q.value.imag()) << ","
          << fmt17(row.q.error_radius) << "," << regime_name(row.q.regime) << "\n";
    } else {
      out << ",,,error: " << row.error << "\n";
      ++failures;
    }
  }
  return (failures == lambdas.size() && !lambdas.empty()) ? kExitSuiteFail : kExitOk;
}

int cmd_dual_check(const std::string& path, const std::vector<std::string>& lambdas, double tol,
                   int budget, std::ostream& out) {
  IntegralSystem sys = load_validated(path);
  out << "lambda,q,q_dual,identity_residual,bound,conjugation_residual,status\n";
  bool any_fail = false;
  for (const std::string& text : lambdas) {
    Complex lam = parse_complex(text);
    try {
      DualityReport rep = check_duality_identity(sys, lam, tol, budget);
      bool pass = rep.pass() && rep.conjugation_residual <= 1e-10;
      any_fail = any_fail || !pass;
      out << text << "," << fmt17(rep.q.value.real()) << (rep.q.value.imag() >= 0 ? "+" : "")
          << fmt17(rep.q.value.imag()) << "i," << fmt17(rep.q_dual.value.real())
          << (rep.q_dual.value.imag() >= 0 ? "+" : "") << fmt17(rep.q_dual.value.imag()) << "i,"
          << fmt17(rep.identity_residual) << "," << fmt17(rep.residual_bound) << ","
          << fmt17(rep.conjugation_residual) << "," << (pass ? "PASS" : "FAIL") << "\n";
    } catch (const Error& e) {
      if (e.code() == Errc::Indefinite) {
        out << text << ",,,,,," << "SKIP (dual indefinite)\n";
      } else {
        out << text << ",,,,,," << "FAIL (" << e.what() << ")\n";
        any_fail = true;
      }
    }
  }
  return any_fail ? kExitSuiteFail : kExitOk;
}

int cmd_suite(const std::string& path, double tol, int budget, std::ostream& out) {
  IntegralSystem sys = load_validated(path);
  bool all_pass = true;
  auto report = [&](const std::string& name, double residual, double tolerance) {
    bool pass = residual <= tolerance;
    all_pass = all_pass && pass;
    out << (pass ? "[PASS] " : "[FAIL] ") << name << ": residual " << fmt17(residual)
        << " (tol " << fmt17(tolerance) << ")\n";
  };

  std::vector<double> xs;
  sys.r1().add_breakpoints(0.0, sys.finite_end() + 1.0, xs);
  sys.r2().add_breakpoints(0.0, sys.finite_end() + 1.0, xs);
  xs.push_back(sys.finite_end() + 0.5);
  xs.push_back(sys.finite_end() + 1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::vector<Complex> lams = {{-2.0, 0.0}, {-0.5, 0.0}, {0.0, 1.0},
                                     {1.0, 1.0},  {0.5, -0.75}, {0.0, 2.5}};
  const std::vector<Complex> mus = {{0.0, 1.0}, {2.0, -3.0}, {-1.0, 0.5}};

  double wron = 0.0, green = 0.0, kernel = 0.0;
  for (double x : xs) {
    for (Complex lam : lams) {
      wron = std::max(wron, check_wronskian(sys, x, lam));
      for (Complex mu : mus) {
        green = std::max(green, check_green(sys, x, lam, mu));
        kernel = std::max(kernel, check_kernel_identity(sys, x, lam, mu));
      }
    }
  }
  report("wronskian", wron, 1e-10);
  report("green", green, 1e-9);
  report("kernel", kernel, 1e-9);

  // nesting of five discs past the first spectral mass
  {
    Complex lam{0.0, 1.0};
    double a = sys.r2().inf_support();
    std::vector<double> ls;
    for (double l : truncation_schedule(sys, budget))
      if (l > a && ls.size() < 5) ls.push_back(l);
    double worst = 0.0;
    std::optional<WeylDisc> prev;
    for (double l : ls) {
      WeylDisc d = weyl_disc(sys, l, lam);
      if (prev)
        worst = std::max(worst, std::abs(d.center - prev->center) - (prev->radius - d.radius));
      prev = d;
    }
    report("weyl-nesting", worst, 1e-9);
  }

  // Stieltjes behaviour of q on sampled points
  {
    double worst = 0.0;
    for (Complex lam : {Complex{0.3, 0.7}, Complex{-1.0, 0.5}, Complex{0.0, 2.0}}) {
      QEnclosure q = principal_q(sys, lam, tol, budget);
      worst = std::max(worst, -(q.value.imag() + q.error_radius));
    }
    for (double t : {-0.5, -1.0, -3.0}) {
      QEnclosure q = principal_q(sys, Complex{t, 0.0}, tol, budget);
      worst = std::max(worst, std::abs(q.value.imag()));
      worst = std::max(worst, -(q.value.real() + q.error_radius));
    }
    report("stieltjes-sampling", worst, 1e-10);
  }

  return all_pass ? kExitOk : kExitSuiteFail;
}

int cmd_sweep(const std::string& path, const std::string& grid, const std::string& neg_grid,
              const std::string& out_path, double tol, int budget, std::ostream& err) {
  IntegralSystem sys = load_validated(path);

  std::vector<Complex> points;
  auto split_spec = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
      if (ch == ':') { parts.push_back(cur); cur.clear(); }
      else cur.push_back(ch);
    }
    parts.push_back(cur);
    return parts;
  };
  try {
    if (!grid.empty()) {
      auto p = split_spec(grid);
      if (p.size() != 4) fail(Errc::ParseError, "--grid expects re_min:re_max:n:im");
      double lo = std::stod(p[0]), hi = std::stod(p[1]);
      long n = std::stol(p[2]);
      double im = std::stod(p[3]);
      for (long i = 0; i < n; ++i) {
        double re = (n == 1) ? lo : lo + (hi - lo) * double(i) / double(n - 1);
        points.emplace_back(re, im);
      }
    } else if (!neg_grid.empty()) {
      auto p = split_spec(neg_grid);
      if (p.size() != 3) fail(Errc::ParseError, "--neg-grid expects t_min:t_max:n");
      double lo = std::stod(p[0]), hi = std::stod(p[1]);
      long n = std::stol(p[2]);
      if (!(lo > 0.0) || !(hi >= lo)) fail(Errc::ParseError, "--neg-grid needs 0 < t_min <= t_max");
      for (long i = 0; i < n; ++i) {
        double t = (n == 1) ? lo : lo * std::pow(hi / lo, double(i) / double(n - 1));
        points.emplace_back(-t, 0.0);
      }
    } else {
      fail(Errc::ParseError, "sweep needs --grid or --neg-grid");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::ParseError, std::string("bad grid spec: ") + e.what());
  }

  std::vector<QRow> rows(points.size());
  int threads = std::min(thread_budget(), static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  if (threads <= 1 || points.size() < 2) {
    for (std::size_t i = 0; i < points.size(); ++i)
      rows[i] = evaluate_q(sys, points[i], tol, budget);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
        rows[i] = evaluate_q(sys, points[i], tol, budget);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ofstream file(out_path);
  if (!file) {
    err << "cannot open '" << out_path << "' for writing\n";
    return kExitIo;
  }
  file << "lambda_re,lambda_im,q_re,q_im,err_radius,regime\n";
  for (const QRow& row : rows) {
    file << fmt17(row.lambda.real()) << "," << fmt17(row.lambda.imag()) << ",";
    if (row.ok)
      file << fmt17(row.q.value.real()) << "," << fmt17(row.q.value.imag()) << ","
           << fmt17(row.q.error_radius) << "," << regime_name(row.q.regime) << "\n";
    else
      file << "nan,nan,nan,error: " << row.error << "\n";
  }
  file.flush();
  if (!file) {
    err << "write failure on '" << out_path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(Errc::ParseError, "empty spectral parameter");

  auto parse_real = [](const std::string& t, double& out) {
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
  };

  if (s.back() == 'i' || s.back() == 'I') {
    std::string body = s.substr(0, s.size() - 1);
    // split off a trailing imaginary part: find the sign separating re and im
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        double re, im;
        std::string im_part = body.substr(k);
        if (im_part == "+") im_part = "1";
        if (im_part == "-") im_part = "-1";
        if (parse_real(body.substr(0, k), re) && parse_real(im_part, im)) return {re, im};
        break;
      }
    }
    if (body.empty()) return {0.0, 1.0};
    if (body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    double im;
    if (parse_real(body, im)) return {0.0, im};
    fail(Errc::ParseError, "cannot parse '" + text + "' as a complex number");
  }
  double re;
  if (parse_real(s, re)) return {re, 0.0};
  fail(Errc::ParseError, "cannot parse '" + text + "' as a complex number");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"integral systems S[R1,R2]: propagation, Weyl analysis, duality"};
  app.require_subcommand(1);

  std::string path, out_path, grid, neg_grid;
  std::vector<std::string> lambdas;
  double tol = 1e-8;
  int budget = 200;

  auto add_common = [&](CLI::App* cmd, bool with_lambda) {
    cmd->add_option("spec", path, "system spec file")->required();
    cmd->add_option("--tol", tol, "enclosure tolerance");
    cmd->add_option("--budget", budget, "truncation-schedule budget");
    if (with_lambda)
      cmd->add_option("--lambda", lambdas, "spectral parameters (e.g. -1, i, 1+2i)")
          ->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "check the spec against the assumptions");
  validate->add_option("spec", path, "system spec file")->required();
  CLI::App* cls = app.add_subcommand("classify", "regularity and endpoint type");
  cls->add_option("spec", path, "system spec file")->required();
  CLI::App* q = app.add_subcommand("q", "principal Titchmarsh-Weyl coefficient");
  add_common(q, true);
  CLI::App* dc = app.add_subcommand("dual-check", "duality identity report");
  add_common(dc, true);
  CLI::App* suite = app.add_subcommand("suite", "structural identity suite");
  add_common(suite, false);
  CLI::App* sweep = app.add_subcommand("sweep", "CSV sweep of q over a lambda grid");
  add_common(sweep, false);
  sweep->add_option("--grid", grid, "re_min:re_max:n:im");
  sweep->add_option("--neg-grid", neg_grid, "log-spaced negative axis t_min:t_max:n");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  std::vector<const char*> argv;
  argv.push_back("kw");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(path, out);
    if (cls->parsed()) return cmd_classify(path, out);
    if (q->parsed()) return cmd_q(path, lambdas, tol, budget, out);
    if (dc->parsed()) return cmd_dual_check(path, lambdas, tol, budget, out);
    if (suite->parsed()) return cmd_suite(path, tol, budget, out);
    if (sweep->parsed()) return cmd_sweep(path, grid, neg_grid, out_path, tol, budget, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSuiteFail;
  }
  return kExitParse;
}

}  // namespace kw::cli
