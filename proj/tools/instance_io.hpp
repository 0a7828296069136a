#pragma once

// Schema-1 JSON encoding of instances, structures, reports and liftings.
// Complex numbers are [re, im] pairs; matrices are arrays of rows.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "speclift/lift_construct.hpp"
#include "speclift/local_lift_check.hpp"

namespace speclift::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Parse-level problem, reported with the JSON path of the offending field.
class FieldError : public std::runtime_error {
 public:
  FieldError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct InstanceFile {
  std::size_t n = 0;
  std::vector<Complex> nodes;
  std::vector<ComplexMatrix> matrices;
  std::vector<std::vector<Complex>> f;
  ToleranceConfig tolerances;
  std::optional<BlockReading> reading;

  LiftInstance instance() const { return {nodes, matrices, f}; }
};

/// Shapes, finiteness, schema tag, tolerance positivity and distinct nodes.
/// Mathematical preconditions are left to the library.
InstanceFile parse_instance(const Json& j);

Complex parse_complex(const Json& j, const std::string& path);
ComplexMatrix parse_matrix(const Json& j, std::size_t n, const std::string& path);
HoloMatrixMap parse_lifting(const Json& j, const std::string& path);

Json to_json(Complex z);
Json to_json(const ComplexMatrix& a);
Json to_json(const std::vector<Complex>& v);
Json to_json(const SymPoint& y);
Json to_json(const Membership& m);
Json to_json(const ToleranceConfig& t);
Json to_json(const JordanStructure& s);
Json to_json(const LocalReport& r, std::size_t node);
Json to_json(const GlobalVerdict& v);
Json to_json(const HoloMatrixMap& map);
Json to_json(const LiftVerification& v);
Json to_json(const LinePath& p);

}  // namespace speclift::cli
