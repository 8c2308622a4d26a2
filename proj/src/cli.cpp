#include "metrotropy/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "metrotropy/extraction.hpp"
#include "metrotropy/qubit.hpp"
#include "metrotropy/verify.hpp"

namespace metrotropy {

namespace {

using nlohmann::json;

// 17 significant digits round-trip doubles exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos])))
      ++pos;
    if (pos != item.size()) throw std::invalid_argument("trailing garbage in number");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json unitary_json(const Eigen::MatrixXcd& u) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      re_row.push_back(u(i, j).real());
      im_row.push_back(u(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return json{{"re", re}, {"im", im}};
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m,
                  const std::string& indent) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << indent;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << fmt17(m(i, j));
    out << "\n";
  }
}

void print_unitary(std::ostream& out, const Eigen::MatrixXcd& u,
                   const std::string& indent) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    out << indent;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const auto z = u(i, j);
      out << (j ? " " : "") << fmt17(z.real());
      if (z.imag() != 0.0) out << (z.imag() > 0 ? "+" : "") << fmt17(z.imag()) << "i";
    }
    out << "\n";
  }
}

json report_json(const ExtractionReport& r) {
  return json{
      {"kind", r.kind == ExtractionKind::ergotropy ? "ergotropy" : "metrotropy"},
      {"value", r.value},
      {"initial_energy", r.initial_energy},
      {"final_energy", r.final_energy},
      {"optimal_permutation",
       {{"map", r.optimal_permutation.map()}, {"cycles", r.optimal_permutation.cycles()}}},
      {"channel", matrix_json(r.channel.entries())},
      {"realizing_unitary", unitary_json(r.realizing_unitary.entries())}};
}

void report_text(std::ostream& out, const ExtractionReport& r) {
  out << (r.kind == ExtractionKind::ergotropy ? "ergotropy" : "metrotropy") << ":\n"
      << "  value: " << fmt17(r.value) << "\n"
      << "  initial energy: " << fmt17(r.initial_energy) << "\n"
      << "  final energy: " << fmt17(r.final_energy) << "\n"
      << "  permutation: " << r.optimal_permutation.cycles() << "\n"
      << "  channel:\n";
  print_matrix(out, r.channel.entries(), "    ");
  out << "  realizing unitary:\n";
  print_unitary(out, r.realizing_unitary.entries(), "    ");
}

struct GlobalFlags {
  std::string format;  // "", "text", "json", "csv"
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int multistarts = 64;
  std::string out_path;
};

std::ostream& select_out(const GlobalFlags& g, std::ofstream& file, std::ostream& out) {
  if (g.out_path.empty()) return out;
  file.open(g.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output path: " + g.out_path);
  return file;
}

int cmd_compute(const GlobalFlags& g, const std::string& energies_s,
                const std::string& populations_s, std::ostream& out) {
  const StationarySystem sys(parse_doubles(energies_s), parse_doubles(populations_s));
  const ExtractionReport w = ergotropy(sys);
  const ExtractionReport m = metrotropy_matching(sys);
  std::ofstream file;
  std::ostream& os = select_out(g, file, out);
  if (g.format == "json") {
    os << json{{"schema_version", 1},
               {"energies", sys.energies()},
               {"populations", sys.populations()},
               {"initial_energy", initial_energy(sys)},
               {"ergotropy", report_json(w)},
               {"metrotropy", report_json(m)}}
              .dump(2)
       << "\n";
  } else {
    os << "initial energy: " << fmt17(initial_energy(sys)) << "\n";
    report_text(os, w);
    report_text(os, m);
  }
  return 0;
}

struct ScanRow {
  std::vector<double> populations;
  double ergotropy_value;
  double metrotropy_value;
  double half_gap;
  bool sigma_w_involutive;
};

std::vector<ScanRow> run_scan(const std::vector<double>& energies, double step) {
  const double k_real = 1.0 / step;
  const auto k_steps = static_cast<long>(std::llround(k_real));
  if (k_steps < 1 || std::abs(k_steps * step - 1.0) > 1e-12)
    throw std::invalid_argument("scan: step must divide 1");
  const std::size_t n = energies.size();
  if (n < 2) throw std::invalid_argument("scan: need at least two levels");

  std::vector<ScanRow> rows;
  std::vector<double> pops(n, 0.0);
  std::vector<long> idx(n - 1, 0);
  // Deterministic odometer order: first coordinate outermost.
  std::function<void(std::size_t, long)> recurse = [&](std::size_t d, long left) {
    if (d == n - 1) {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        pops[i] = static_cast<double>(idx[i]) * step;
        sum += pops[i];
      }
      pops[n - 1] = 1.0 - sum;
      if (pops[n - 1] < 0.0) pops[n - 1] = 0.0;
      const StationarySystem sys(std::vector<double>(energies), pops);
      const double w = ergotropy(sys).value;
      const double m = metrotropy_matching(sys).value;
      const double half_gap = 0.5 * w - m;
      rows.push_back(ScanRow{pops, w, m, half_gap, half_gap < 1e-12});
      return;
    }
    for (long i = 0; i <= left; ++i) {
      idx[d] = i;
      recurse(d + 1, left - i);
    }
  };
  recurse(0, k_steps);
  return rows;
}

int cmd_scan(const GlobalFlags& g, const std::string& energies_s, double step,
             std::ostream& out) {
  const std::vector<double> energies = parse_doubles(energies_s);
  const std::vector<ScanRow> rows = run_scan(energies, step);
  std::ofstream file;
  std::ostream& os = select_out(g, file, out);

  if (g.format == "json") {
    json jrows = json::array();
    for (const ScanRow& r : rows) {
      json jr;
      for (std::size_t i = 0; i < r.populations.size(); ++i)
        jr["r" + std::to_string(i)] = r.populations[i];
      jr["ergotropy"] = r.ergotropy_value;
      jr["metrotropy"] = r.metrotropy_value;
      jr["half_gap"] = r.half_gap;
      jr["sigma_w_involutive"] = r.sigma_w_involutive;
      jrows.push_back(jr);
    }
    os << json{{"schema_version", 1},
               {"energies", energies},
               {"step", step},
               {"rows", jrows}}
              .dump(2)
       << "\n";
  } else {
    for (std::size_t i = 0; i < energies.size(); ++i)
      os << "r" << i << ",";
    os << "ergotropy,metrotropy,half_gap,sigma_w_involutive\n";
    for (const ScanRow& r : rows) {
      for (double p : r.populations) os << fmt17(p) << ",";
      os << fmt17(r.ergotropy_value) << "," << fmt17(r.metrotropy_value) << ","
         << fmt17(r.half_gap) << "," << (r.sigma_w_involutive ? 1 : 0) << "\n";
    }
  }
  return 0;
}

int cmd_verify(const GlobalFlags& g, const std::string& energies_s,
               const std::string& populations_s, std::ostream& out) {
  const StationarySystem sys(parse_doubles(energies_s), parse_doubles(populations_s));
  OptimizerConfig cfg;
  cfg.multistarts = g.multistarts;
  cfg.seed = g.seed;
  cfg.convergence_tol = g.tol;
  const VerificationReport r = verify_metrotropy(sys, cfg);
  std::ofstream file;
  std::ostream& os = select_out(g, file, out);
  if (g.format == "json") {
    os << json{{"schema_version", 1},
               {"numerical_min", r.numerical_min},
               {"analytic_min", r.analytic_min},
               {"gap", r.gap},
               {"starts_converged", r.starts_converged},
               {"channel_distance", r.channel_distance.value()},
               {"best_channel", matrix_json(r.best_channel.entries())},
               {"best_unitary", unitary_json(r.best_unitary.entries())}}
              .dump(2)
       << "\n";
  } else {
    os << "numerical min: " << fmt17(r.numerical_min) << "\n"
       << "analytic min:  " << fmt17(r.analytic_min) << "\n"
       << "gap:           " << fmt17(r.gap) << "\n"
       << "starts converged: " << r.starts_converged << "\n"
       << "channel distance to (1+sigma)/2: " << fmt17(r.channel_distance.value())
       << "\n"
       << "best channel:\n";
    print_matrix(os, r.best_channel.entries(), "  ");
  }
  return std::abs(r.gap) > 1e-3 ? 1 : 0;
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  const bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if (is_json) {
    json j;
    in >> j;
    if (!j.is_array()) throw std::invalid_argument("matrix file: expected an array");
    for (const auto& jr : j) rows.push_back(jr.get<std::vector<double>>());
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      rows.push_back(parse_doubles(line));
    }
  }
  if (rows.empty()) throw std::invalid_argument("matrix file: no rows");
  const auto n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw std::invalid_argument("matrix file: matrix is not square");
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

int cmd_check_unistochastic(const GlobalFlags& g, const std::string& path,
                            std::ostream& out, std::ostream& err) {
  Eigen::MatrixXd raw = load_matrix(path);
  std::optional<BistochasticMatrix> b;
  try {
    b.emplace(std::move(raw));
  } catch (const std::exception& e) {
    err << "input is not bistochastic: " << e.what() << "\n";
    return 3;
  }
  OptimizerConfig cfg;
  cfg.multistarts = g.multistarts;
  cfg.seed = g.seed;
  cfg.convergence_tol = g.tol;
  const UnistochasticDecision d = decide_unistochastic(*b, cfg);
  std::ofstream file;
  std::ostream& os = select_out(g, file, out);
  const char* verdict = d.verdict == UnistochasticVerdict::certified ? "certified"
                        : d.verdict == UnistochasticVerdict::refuted ? "refuted"
                                                                     : "inconclusive";
  if (g.format == "json") {
    json j{{"schema_version", 1},
           {"verdict", verdict},
           {"best_residual", d.best_residual}};
    if (d.witness) j["witness"] = unitary_json(d.witness->entries());
    os << j.dump(2) << "\n";
  } else {
    os << verdict << " (residual " << fmt17(d.best_residual) << ")\n";
    if (d.witness) {
      os << "witness unitary:\n";
      print_unitary(os, d.witness->entries(), "  ");
    }
  }
  switch (d.verdict) {
    case UnistochasticVerdict::certified: return 0;
    case UnistochasticVerdict::refuted: return 1;
    default: return 2;
  }
}

int cmd_bloch(const GlobalFlags& g, double bz, double rx, double ry, double rz,
              std::ostream& out) {
  const QubitSystem q(bz, BlochVector{rx, ry, rz});
  const double w = qubit_ergotropy(q);
  const QubitMeasurement m = qubit_metrotropy(q);
  const BlochVector post = project_bloch(q.r(), m.direction);
  std::ofstream file;
  std::ostream& os = select_out(g, file, out);
  if (g.format == "json") {
    os << json{{"schema_version", 1},
               {"bz", bz},
               {"ergotropy", w},
               {"metrotropy", m.value},
               {"direction", {m.direction.x, m.direction.y, m.direction.z}},
               {"pre_bloch", {q.r().x, q.r().y, q.r().z}},
               {"post_bloch", {post.x, post.y, post.z}}}
              .dump(2)
       << "\n";
  } else {
    os << "ergotropy:  " << fmt17(w) << "\n"
       << "metrotropy: " << fmt17(m.value) << "\n"
       << "measurement direction: " << fmt17(m.direction.x) << " "
       << fmt17(m.direction.y) << " " << fmt17(m.direction.z) << "\n"
       << "pre-measurement Bloch vector:  " << fmt17(q.r().x) << " "
       << fmt17(q.r().y) << " " << fmt17(q.r().z) << "\n"
       << "post-measurement Bloch vector: " << fmt17(post.x) << " " << fmt17(post.y)
       << " " << fmt17(post.z) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Ergotropy and metrotropy of finite quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--format", g.format, "Output format: text|json|csv");
  app.add_option("--seed", g.seed, "Optimizer seed");
  app.add_option("--tol", g.tol, "Optimizer convergence tolerance");
  app.add_option("--multistarts", g.multistarts, "Optimizer start count");
  app.add_option("--out", g.out_path, "Write output to this path instead of stdout");

  std::string energies, populations, matrix_path;
  double step = 0.01;
  double bz = 1.0, rx = 0.0, ry = 0.0, rz = 0.0;

  CLI::App* compute = app.add_subcommand("compute", "Ergotropy and metrotropy of one system");
  compute->add_option("--energies", energies, "Comma-separated energy levels")->required();
  compute->add_option("--populations", populations, "Comma-separated populations")->required();

  CLI::App* scan = app.add_subcommand("scan", "Simplex grid scan of W, M and W/2 - M");
  scan->add_option("--energies", energies, "Comma-separated energy levels")
      ->default_val("-1,0,1");
  scan->add_option("--step", step, "Grid step; must divide 1")->default_val(0.01);

  CLI::App* verify = app.add_subcommand("verify", "Numerical check of the analytic metrotropy");
  verify->add_option("--energies", energies, "Comma-separated energy levels")->required();
  verify->add_option("--populations", populations, "Comma-separated populations")->required();

  CLI::App* check = app.add_subcommand("check-unistochastic",
                                       "Certify or refute unistochasticity of a matrix file");
  check->add_option("matrix", matrix_path, "JSON or CSV matrix file")->required();

  CLI::App* bloch = app.add_subcommand("bloch", "Closed-form qubit ergotropy and metrotropy");
  bloch->add_option("--bz", bz, "Field strength (positive)")->required();
  bloch->add_option("--rx", rx, "Bloch vector x");
  bloch->add_option("--ry", ry, "Bloch vector y");
  bloch->add_option("--rz", rz, "Bloch vector z");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("metrotropy");
  for (const std::string& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (compute->parsed()) return cmd_compute(g, energies, populations, out);
    if (scan->parsed()) return cmd_scan(g, energies, step, out);
    if (verify->parsed()) return cmd_verify(g, energies, populations, out);
    if (check->parsed()) return cmd_check_unistochastic(g, matrix_path, out, err);
    if (bloch->parsed()) return cmd_bloch(g, bz, rx, ry, rz, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return check->parsed() ? 3 : 1;
  }
  return 1;
}

}  // namespace metrotropy
