#pragma once

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netloc {

// Loss family selector used throughout the library. All units are kilometers.
enum class Family { quadratic, absolute, huber };

std::string family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);

// Unordered sensor pair, stored canonically as (min, max).
using Edge = std::pair<int, int>;
// (sensor, anchor) pair.
using AnchorLink = std::pair<int, int>;

inline Edge make_edge(int i, int j) { return i <= j ? Edge{i, j} : Edge{j, i}; }

/// Sensor network topology: n sensors with unknown positions, m anchors with
/// known positions, range edges between sensors, and sensor-anchor links.
/// Anchors are not graph vertices.
struct Network {
  int dim = 2;                // spatial dimension p (2 or 3)
  int sensors = 0;            // n
  Eigen::MatrixXd anchors;    // m x dim, row k = a_k (km)
  std::vector<Edge> edges;          // canonical (min,max), sorted ascending
  std::vector<AnchorLink> anchor_links;  // sorted ascending

  int anchor_count() const { return static_cast<int>(anchors.rows()); }

  // Per-sensor view of edges (N_i) and anchor links (A_i).
  std::vector<int> neighbors(int sensor) const;
  std::vector<int> linked_anchors(int sensor) const;
};

/// Sensor coordinates, row i = x_i (km).
struct Positions {
  Eigen::MatrixXd coords;  // n x dim

  Positions() = default;
  explicit Positions(Eigen::MatrixXd c) : coords(std::move(c)) {}

  int count() const { return static_cast<int>(coords.rows()); }
  int dim() const { return static_cast<int>(coords.cols()); }
};

/// Flatten row-major into the stacked vector x = (x_1, ..., x_n) of length n*p.
Eigen::VectorXd stack(const Positions& positions);
/// Inverse of stack(). Throws std::invalid_argument on length mismatch.
Positions unstack(const Eigen::VectorXd& stacked, int sensors, int dim);

/// Noisy range measurements d_ij (sensor-sensor) and r_ik (sensor-anchor), km.
/// Keys must match the network's edge and anchor-link sets exactly.
struct Measurements {
  std::map<Edge, double> ranges;
  std::map<AnchorLink, double> anchor_ranges;
};

/// Loss family plus Huber radii: one global default R with optional per-edge
/// and per-anchor-link overrides.
struct LossSpec {
  Family family = Family::huber;
  double huber_radius = 0.1;  // R, km
  std::map<Edge, double> edge_radius;
  std::map<AnchorLink, double> anchor_link_radius;

  double radius_for(const Edge& edge) const;
  double radius_for(const AnchorLink& link) const;
};

struct ProblemInstance {
  Network network;
  Measurements measurements;
  LossSpec loss;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
};

/// Structural checks on a network alone (dimension, index ranges, self-loops,
/// duplicates, finite anchors).
ValidationReport validate_network(const Network& network);

/// Full instance check: network structure, measurement keys matching the
/// topology exactly, nonnegative finite ranges, and positive Huber radii.
/// Report style: returns every violation found, never throws.
ValidationReport validate(const ProblemInstance& instance);

struct DegreeStats {
  std::vector<int> edge_degree;      // k_i counting sensor-sensor edges
  std::vector<int> combined_degree;  // edges plus anchor links
  double edge_average = 0.0;
  double combined_average = 0.0;
};

/// Per-sensor degree k_i and average <k>. Reported twice: sensor-sensor edges
/// only, and combined with anchor links (the generator targets the combined
/// figure).
DegreeStats degree_stats(const Network& network);

}  // namespace netloc
