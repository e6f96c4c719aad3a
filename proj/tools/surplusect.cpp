#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surplusect/bounds_tables.hpp"
#include "surplusect/clean_loop.hpp"
#include "surplusect/concurrent_normals.hpp"
#include "surplusect/crofton_statistics.hpp"
#include "surplusect/errors.hpp"
#include "surplusect/intersection_counting.hpp"
#include "surplusect/json_io.hpp"
#include "surplusect/parallel.hpp"

using namespace surplusect;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kBadInput = 3, kDegenerate = 4, kStructure = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  return out;
}

Json real_vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json projective_json(const ProjectivePoint& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back({p[i].real(), p[i].imag()});
  return out;
}

void emit(const Json& j) { std::cout << dump_json(j) << '\n'; }

// -- bounds -------------------------------------------------------------------

int cmd_bounds(int n_max, const std::string& format) {
  const auto rows = table1(n_max);
  if (format == "csv") {
    write_bounds_csv(rows, std::cout);
  } else {
    emit(bounds_to_json(rows));
  }
  return kOk;
}

// -- crofton ------------------------------------------------------------------

int cmd_crofton(int n, std::int64_t samples, std::uint64_t seed, int starts,
                const std::string& format) {
  if (n < 1 || n > 4) throw UsageError("crofton: --n must be in [1, 4]");
  if (samples < 1) throw UsageError("crofton: --samples must be >= 1");
  TrialOptions options;
  options.starts_per_dim = starts;
  const Tally t = run_clifford_trials(n, samples, seed, options);
  const DistributionReport r = distribution_report(t);
  if (format == "csv") {
    std::cout << "count,occurrences,estimate,wilson_lower,wilson_upper\n";
    for (const auto& [count, e] : r.probabilities) {
      std::cout << count << ',' << t.histogram.at(count) << ',' << format_double(e.estimate) << ','
                << format_double(e.lower) << ',' << format_double(e.upper) << '\n';
    }
    return kOk;
  }
  Json j = report_to_json(t, r);
  if (n == 2) j["chi_square_p_value"] = chi_square_consistency(t, clifford_n2_law());
  emit(j);
  return kOk;
}

// -- count --------------------------------------------------------------------

UnitaryMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("matrix file is not valid JSON: ") + e.what());
  }
  try {
    return UnitaryMatrix(parse_complex_matrix(j));
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
}

int cmd_count(const std::string& path, const std::string& method, const std::string& against,
              int starts, std::uint64_t seed) {
  const UnitaryMatrix g = read_matrix(path);
  const int n = static_cast<int>(g.dim()) - 1;
  if (against == "rpn") {
    const RpnCount r = count_rpn_rpn(g);
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses) witnesses.push_back(projective_json(w));
    Json params = Json::array();
    for (const auto& p : r.parameters) params.push_back(real_vector_json(p));
    emit(Json{{"n", n},
              {"against", "rpn"},
              {"count", r.count},
              {"parameters", params},
              {"witnesses", witnesses},
              {"min_eigen_gap", r.min_eigen_gap},
              {"degenerate", r.degenerate}});
    return r.degenerate ? kDegenerate : kOk;
  }

  std::string used = method;
  if (used == "auto") used = n == 2 ? "pencil" : "multistart";
  if (used == "pencil" && n != 2) throw UsageError("count: the pencil method needs a 3x3 matrix");
  if (used == "multistart" && n > 5) throw UsageError("count: multistart supports n <= 5");
  const QuadricSystem sys = clifford_quadric_system(g);
  const CountResult r = used == "pencil"
                            ? count_conic_pencil(sys)
                            : count_clifford_multistart(sys, starts, RngState{seed, 0});
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(real_vector_json(w));
  emit(Json{{"n", n},
            {"against", "clifford"},
            {"method", used},
            {"count", r.count},
            {"witnesses", witnesses},
            {"transverse", r.transverse},
            {"min_jacobian_sigma", r.min_jacobian_sigma},
            {"degenerate", r.degenerate}});
  return r.degenerate || !r.transverse ? kDegenerate : kOk;
}

// -- normals ------------------------------------------------------------------

Json normal_count_json(const NormalCount& c) {
  Json dirs = Json::array();
  for (const auto& d : c.critical_directions) dirs.push_back(real_vector_json(d));
  return Json{{"count", c.count},
              {"critical_directions", dirs},
              {"morse_indices", c.morse_indices},
              {"euler_sum", c.euler_sum()},
              {"degenerate", c.degenerate},
              {"in_body", c.in_body}};
}

int cmd_normals(const std::string& body, const std::string& q_text, int grid,
                const std::string& bbox_text, const std::string& out_path, int subdivisions) {
  SupportFunction h = [&] {
    try {
      return SupportFunction::parse(body);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }();

  if (grid > 0) {
    if (h.dim() != 2) throw UsageError("normals: --grid needs a planar body");
    if (grid < 2) throw UsageError("normals: --grid must be >= 2");
    const auto b = parse_list(bbox_text, "--bbox");
    if (b.size() != 4) throw UsageError("normals: --bbox needs xmin,ymin,xmax,ymax");
    if (!(b[2] > b[0]) || !(b[3] > b[1])) throw UsageError("normals: empty --bbox");
    const CausticGrid cg = caustic_grid(h, BBox{b[0], b[1], b[2], b[3]}, grid);
    const bool pgm = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".pgm";
    if (out_path.empty()) {
      write_caustic_csv(cg, std::cout);
      return kOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    if (pgm) {
      write_caustic_pgm(cg, out);
    } else {
      write_caustic_csv(cg, out);
    }
    return kOk;
  }

  if (q_text.empty()) throw UsageError("normals: give --q or --grid");
  const auto qv = parse_list(q_text, "--q");
  if (static_cast<int>(qv.size()) != h.dim()) {
    throw UsageError("normals: --q must have " + std::to_string(h.dim()) + " coordinates");
  }
  const RealVector q = Eigen::Map<const RealVector>(qv.data(), static_cast<Eigen::Index>(qv.size()));
  const NormalCount c = h.dim() == 2 ? count_normals_2d(h, q) : count_normals_3d(h, q, subdivisions);
  Json j = normal_count_json(c);
  j["body"] = body;
  j["q"] = qv;
  emit(j);
  return c.degenerate ? kDegenerate : kOk;
}

// -- cleanloop ----------------------------------------------------------------

int cmd_cleanloop(double t1, double t2, std::int64_t samples, std::uint64_t seed, double tol,
                  double radius) {
  StructureReport r;
  try {
    r = intersection_structure_report(t1, t2, samples, seed, tol, radius);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  emit(structure_report_to_json(r));
  return r.passed ? kOk : kStructure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection statistics of Lagrangians in CP^n and concurrent normals of convex bodies"};
  app.require_subcommand(1);
  int threads = -1;
  app.add_option("--threads", threads, "OpenMP threads (default: SURPLUSECT_THREADS or all cores)");
  app.fallthrough();

  auto* bounds = app.add_subcommand("bounds", "Volume lower bounds for the Clifford torus");
  int n_max = 6;
  std::string format = "json";
  bounds->add_option("--n-max", n_max, "Largest n")->check(CLI::Range(1, 12));
  bounds->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* crofton = app.add_subcommand("crofton", "Monte Carlo law of #(T^n cap g RP^n)");
  int n = 2;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int starts = kDefaultStartsPerDim;
  crofton->add_option("--n", n, "Dimension, 1..4");
  crofton->add_option("--samples", samples);
  crofton->add_option("--seed", seed);
  crofton->add_option("--starts-per-dim", starts, "Multistart starts per 2^n roots")
      ->check(CLI::Range(100, 1000000));
  crofton->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* count = app.add_subcommand("count", "Count T^n (or RP^n) cap g RP^n for one matrix");
  std::string matrix_path;
  std::string method = "auto";
  std::string against = "clifford";
  count->add_option("matrix", matrix_path, "JSON file of [re, im] pairs")->required();
  count->add_option("--method", method)->check(CLI::IsMember({"auto", "pencil", "multistart"}));
  count->add_option("--against", against)->check(CLI::IsMember({"clifford", "rpn"}));
  count->add_option("--starts-per-dim", starts)->check(CLI::Range(100, 1000000));
  count->add_option("--seed", seed);

  auto* normals = app.add_subcommand("normals", "Concurrent inward normals of a convex body");
  std::string body;
  std::string q_text;
  int grid = 0;
  std::string bbox_text = "-1,-1,1,1";
  std::string out_path;
  int subdivisions = kDefaultSubdivisions;
  normals->add_option("--body", body, "ellipse:a,b | ellipsoid:a,b,c | disc:r | trig2d:c0,a1,b1,...")
      ->required();
  normals->add_option("--q", q_text, "Query point, comma separated");
  normals->add_option("--grid", grid, "Grid resolution (planar bodies)");
  normals->add_option("--bbox", bbox_text, "xmin,ymin,xmax,ymax");
  normals->add_option("--out", out_path, "Output file (.pgm for a graymap, CSV otherwise)");
  normals->add_option("--subdivisions", subdivisions, "Icosphere level for 3D bodies")
      ->check(CLI::Range(2, 8));

  auto* cleanloop = app.add_subcommand("cleanloop", "Check the intersection structure of L_t1 and L_t2");
  double t1 = 0.0;
  double t2 = 0.0;
  double tol = 1e-9;
  double radius = kDefaultCircleRadius;
  samples = 10000;
  cleanloop->add_option("--t1", t1)->required();
  cleanloop->add_option("--t2", t2)->required();
  cleanloop->add_option("--samples", samples);
  cleanloop->add_option("--seed", seed);
  cleanloop->add_option("--tol", tol);
  cleanloop->add_option("--circle-radius", radius);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (threads < 0) threads = thread_count_from_env();
  set_thread_count(threads);

  try {
    if (app.got_subcommand(bounds)) return cmd_bounds(n_max, format);
    if (app.got_subcommand(crofton)) return cmd_crofton(n, samples, seed, starts, format);
    if (app.got_subcommand(count)) return cmd_count(matrix_path, method, against, starts, seed);
    if (app.got_subcommand(normals)) {
      return cmd_normals(body, q_text, grid, bbox_text, out_path, subdivisions);
    }
    if (app.got_subcommand(cleanloop)) return cmd_cleanloop(t1, t2, samples, seed, tol, radius);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const NotUnitary& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Degenerate& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const MeshTooCoarse& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const BudgetExceeded& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const StructureViolation& e) {
    std::cerr << "structure check failed: " << e.what() << '\n';
    return kStructure;
  } catch (const ParityViolation& e) {
    std::cerr << "structure check failed: " << e.what() << '\n';
    return kStructure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
