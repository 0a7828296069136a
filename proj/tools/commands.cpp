#include "commands.hpp"

#include <unistd.h>

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "instance_io.hpp"

namespace speclift::cli {

namespace {

// Residual tolerance for constructed liftings.
constexpr double kLiftTolerance = 1e-7;
constexpr std::size_t kFiberSamples = 32;

struct Validation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path, const std::string& label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Validation(label + ": cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 unavailable");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

Json parse_json(const std::string& text, const std::string& label) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Validation(label + ": invalid JSON (" + std::string(e.what()) + ")");
  }
}

void write_atomic(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void require_index(std::size_t index, std::size_t count, const std::string& flag, const std::string& what) {
  if (index >= count) {
    throw Validation(flag + ": index " + std::to_string(index) + " out of range (" + std::to_string(count) + " " + what + ")");
  }
}

void require_instance_data(const InstanceFile& in) {
  if (in.nodes.empty()) throw Validation("$.nodes: required by this command");
  if (in.f.empty()) throw Validation("$.f: required by this command");
}

const char* kCriterionNote =
    "only the local jet criterion is checked; cyclicity of a lifting away from the node is not part of the verdict";

Json cmd_project(const InstanceFile& in) {
  Json points = Json::array();
  for (std::size_t i = 0; i < in.matrices.size(); ++i) points.push_back(Json{{"matrix", i}, {"pi", to_json(project(in.matrices[i]))}});
  return Json{{"points", std::move(points)}};
}

Json cmd_membership(const InstanceFile& in) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < in.matrices.size(); ++i) {
    const Membership ball = in_spectral_ball(in.matrices[i]);
    const Membership poly = in_symmetrized_polydisc(project(in.matrices[i]));
    rows.push_back(Json{{"matrix", i},
                        {"spectral_ball", to_json(ball)},
                        {"symmetrized_polydisc", to_json(poly)},
                        {"agree", ball.inside == poly.inside}});
  }
  return Json{{"matrices", std::move(rows)}};
}

Json cmd_jordan(const InstanceFile& in, const Options& opt, const ToleranceConfig& tol) {
  require_index(opt.index, in.matrices.size(), "--index", "matrices");
  return Json{{"index", opt.index}, {"structure", to_json(jordan_structure(in.matrices[opt.index], tol))}};
}

Json cmd_dseq(const InstanceFile& in, const Options& opt, const ToleranceConfig& tol) {
  require_index(opt.index, in.matrices.size(), "--index", "matrices");
  const JordanStructure s = jordan_structure(in.matrices[opt.index], tol);
  return Json{{"index", opt.index}, {"structure", to_json(s)}, {"d", d_sequence(s)}};
}

Json cmd_check_local(const InstanceFile& in, const Options& opt, const ToleranceConfig& tol, BlockReading reading) {
  require_instance_data(in);
  require_index(opt.node, in.nodes.size(), "--node", "nodes");
  const Complex p = in.nodes[opt.node];
  if (!(std::abs(p) < 1.0)) throw Validation("$.nodes[" + std::to_string(opt.node) + "]: node is outside the unit disc");
  const LocalProblem problem{p, in.matrices[opt.node], node_jets(in.instance(), opt.node)};
  Json out = to_json(check_local(problem, reading, tol), opt.node);
  out["note"] = kCriterionNote;
  return out;
}

Json cmd_check_global(const InstanceFile& in, const ToleranceConfig& tol, BlockReading reading) {
  require_instance_data(in);
  Json out = to_json(check_global(in.instance(), reading, tol));
  out["note"] = kCriterionNote;
  return out;
}

Json cmd_lift(const InstanceFile& in, const Options& opt, const ToleranceConfig& tol) {
  require_instance_data(in);
  const LiftInstance inst = in.instance();
  const HoloMatrixMap map = global_cyclic_lift(inst, tol, opt.seed);
  return Json{{"lifting", to_json(map)},
              {"verification", to_json(verify_lift(map, inst, opt.samples, kLiftTolerance))},
              {"warnings", interpolation_warnings(inst.nodes)}};
}

Json cmd_connect(const InstanceFile& in, const Options& opt, const ToleranceConfig& tol) {
  require_index(opt.from, in.matrices.size(), "--from", "matrices");
  require_index(opt.to, in.matrices.size(), "--to", "matrices");
  const ComplexMatrix& b = in.matrices[opt.from];
  const ComplexMatrix& c = in.matrices[opt.to];
  const LinePath path = connect_similar(b, c, tol, opt.seed);

  const double endpoint = norm_inf(path.endpoint(b) - c) / std::max(1.0, norm_inf(c));
  const SymPoint target = project(b);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit;
  double fiber = 0.0;
  for (std::size_t s = 0; s < kFiberSamples && !path.factors.empty(); ++s) {
    std::vector<double> t(path.factors.size());
    for (double& x : t) x = unit(rng);
    fiber = std::max(fiber, consistency_residual(target, project(path.apply(b, t))));
  }
  bool nilpotent = true;
  for (const auto& f : path.factors) nilpotent = nilpotent && exactly_nilpotent(f);
  return Json{{"from", opt.from},
              {"to", opt.to},
              {"path", to_json(path)},
              {"endpoint_residual", endpoint},
              {"fiber_residual", fiber},
              {"fiber_samples", path.factors.empty() ? 0 : kFiberSamples},
              {"factors_nilpotent", nilpotent}};
}

Json cmd_verify(const InstanceFile& in, const Options& opt, const Json& lifting) {
  require_instance_data(in);
  // Accept a lift report or a bare lifting object.
  const Json* node = &lifting;
  std::string path = "$";
  if (lifting.is_object() && lifting.contains("payload")) {
    node = &lifting["payload"];
    path = "$.payload";
  }
  if (node->is_object() && node->contains("lifting")) {
    node = &(*node)["lifting"];
    path += ".lifting";
  }
  const HoloMatrixMap map = parse_lifting(*node, path);
  const auto dim = static_cast<Eigen::Index>(in.n);
  if (evaluate(map, 0.0).rows() != dim) throw Validation(path + ": lifting dimension differs from n");
  return Json{{"verification", to_json(verify_lift(map, in.instance(), opt.samples, kLiftTolerance))}};
}

}  // namespace

int run(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Json report{{"schema", kSchemaVersion}, {"tool", "speclift"}, {"version", kVersion}, {"command", opt.command}};
  try {
    const std::string text = read_file(opt.input, "--input");
    report["input_sha256"] = sha256_hex(text);
    const InstanceFile in = parse_instance(parse_json(text, "--input"));

    ToleranceConfig tol = in.tolerances;
    if (opt.rank_tol) tol.rank_tol = *opt.rank_tol;
    if (opt.cluster_tol) tol.cluster_tol = *opt.cluster_tol;
    try {
      tol.validate();
    } catch (const Error& e) {
      throw Validation(std::string("tolerances: ") + e.what());
    }
    BlockReading reading = in.reading.value_or(BlockReading::Grouped);
    if (opt.reading) {
      try {
        reading = parse_block_reading(*opt.reading);
      } catch (const Error&) {
        throw Validation("--reading: expected \"grouped\" or \"per-block\"");
      }
    }
    if (opt.samples == 0) throw Validation("--samples: must be positive");

    report["seed"] = opt.seed;
    report["thresholds"] = to_json(tol);
    report["reading"] = to_string(reading);
    Json lifting;
    if (opt.command == "verify") {
      if (opt.lifting.empty()) throw Validation("--lifting: required by verify");
      const std::string ltext = read_file(opt.lifting, "--lifting");
      report["lifting_sha256"] = sha256_hex(ltext);
      lifting = parse_json(ltext, "--lifting");
    }
    report["status"] = "computed";

    try {
      Json payload;
      if (opt.command == "project") payload = cmd_project(in);
      else if (opt.command == "membership") payload = cmd_membership(in);
      else if (opt.command == "jordan") payload = cmd_jordan(in, opt, tol);
      else if (opt.command == "dseq") payload = cmd_dseq(in, opt, tol);
      else if (opt.command == "check-local") payload = cmd_check_local(in, opt, tol, reading);
      else if (opt.command == "check-global") payload = cmd_check_global(in, tol, reading);
      else if (opt.command == "lift") payload = cmd_lift(in, opt, tol);
      else if (opt.command == "connect") payload = cmd_connect(in, opt, tol);
      else if (opt.command == "verify") payload = cmd_verify(in, opt, lifting);
      else throw Validation("command: unknown command " + opt.command);
      report["payload"] = std::move(payload);
    } catch (const Error& e) {
      if (is_validation_error(e.code())) throw;
      report["status"] = "numerical_failure";
      report["error"] = Json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report["wall_time_seconds"] = wall;
      write_atomic(opt.output, report.dump(2) + "\n");
      std::cerr << "speclift: numerical failure: " << e.what() << "\n";
      return kNumerical;
    }
  } catch (const FieldError& e) {
    std::cerr << "speclift: validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Validation& e) {
    std::cerr << "speclift: validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "speclift: validation error: " << e.what() << "\n";
    return kValidation;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["wall_time_seconds"] = wall;
  write_atomic(opt.output, report.dump(2) + "\n");
  return kComputed;
}

}  // namespace speclift::cli
