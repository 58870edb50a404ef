#include "netloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace netloc {

std::string family_name(Family family) {
  switch (family) {
    case Family::quadratic: return "quadratic";
    case Family::absolute: return "absolute";
    case Family::huber: return "huber";
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "quadratic" || name == "q") return Family::quadratic;
  if (name == "absolute" || name == "l1") return Family::absolute;
  if (name == "huber" || name == "h") return Family::huber;
  return std::nullopt;
}

std::vector<int> Network::neighbors(int sensor) const {
  std::vector<int> out;
  for (const auto& [i, j] : edges) {
    if (i == sensor) out.push_back(j);
    else if (j == sensor) out.push_back(i);
  }
  return out;
}

std::vector<int> Network::linked_anchors(int sensor) const {
  std::vector<int> out;
  for (const auto& [i, k] : anchor_links) {
    if (i == sensor) out.push_back(k);
  }
  return out;
}

Eigen::VectorXd stack(const Positions& positions) {
  const int n = positions.count();
  const int p = positions.dim();
  Eigen::VectorXd out(n * p);
  for (int i = 0; i < n; ++i) {
    out.segment(i * p, p) = positions.coords.row(i).transpose();
  }
  return out;
}

Positions unstack(const Eigen::VectorXd& stacked, int sensors, int dim) {
  if (sensors < 0 || dim <= 0 || stacked.size() != static_cast<Eigen::Index>(sensors) * dim) {
    std::ostringstream msg;
    msg << "unstack: vector of length " << stacked.size() << " does not match " << sensors
        << " sensors x " << dim << " dims";
    throw std::invalid_argument(msg.str());
  }
  Eigen::MatrixXd coords(sensors, dim);
  for (int i = 0; i < sensors; ++i) {
    coords.row(i) = stacked.segment(i * dim, dim).transpose();
  }
  return Positions{std::move(coords)};
}

double LossSpec::radius_for(const Edge& edge) const {
  auto it = edge_radius.find(edge);
  return it != edge_radius.end() ? it->second : huber_radius;
}

double LossSpec::radius_for(const AnchorLink& link) const {
  auto it = anchor_link_radius.find(link);
  return it != anchor_link_radius.end() ? it->second : huber_radius;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

namespace {

void add(ValidationReport& report, std::string code, std::string message) {
  report.violations.push_back({std::move(code), std::move(message)});
}

std::string edge_str(const Edge& e) {
  std::ostringstream s;
  s << "{" << e.first << "," << e.second << "}";
  return s.str();
}

std::string link_str(const AnchorLink& l) {
  std::ostringstream s;
  s << "(" << l.first << "," << l.second << ")";
  return s.str();
}

}  // namespace

ValidationReport validate_network(const Network& network) {
  ValidationReport report;
  if (network.dim != 2 && network.dim != 3) {
    add(report, "bad_dimension", "dim must be 2 or 3, got " + std::to_string(network.dim));
  }
  if (network.sensors < 0) {
    add(report, "bad_sensor_count", "negative sensor count");
  }
  if (network.anchors.size() > 0 && network.anchors.cols() != network.dim) {
    add(report, "anchor_shape_mismatch",
        "anchors have " + std::to_string(network.anchors.cols()) + " columns, expected dim " +
            std::to_string(network.dim));
  }
  if (!network.anchors.allFinite()) {
    add(report, "nonfinite_anchor", "anchor coordinates contain non-finite values");
  }

  std::set<Edge> seen_edges;
  for (const auto& edge : network.edges) {
    if (edge.first == edge.second) {
      add(report, "self_loop", "self-loop edge " + edge_str(edge));
      continue;
    }
    if (edge.first < 0 || edge.second < 0 || edge.first >= network.sensors ||
        edge.second >= network.sensors) {
      add(report, "edge_index_out_of_range", "edge " + edge_str(edge) + " out of range");
      continue;
    }
    if (!seen_edges.insert(make_edge(edge.first, edge.second)).second) {
      add(report, "duplicate_edge", "duplicate edge " + edge_str(edge));
    }
  }

  std::set<AnchorLink> seen_links;
  for (const auto& link : network.anchor_links) {
    if (link.first < 0 || link.first >= network.sensors || link.second < 0 ||
        link.second >= network.anchor_count()) {
      add(report, "anchor_link_index_out_of_range", "anchor link " + link_str(link) + " out of range");
      continue;
    }
    if (!seen_links.insert(link).second) {
      add(report, "duplicate_anchor_link", "duplicate anchor link " + link_str(link));
    }
  }
  return report;
}

ValidationReport validate(const ProblemInstance& instance) {
  ValidationReport report = validate_network(instance.network);
  const Network& net = instance.network;

  std::set<Edge> edge_set;
  for (const auto& e : net.edges) edge_set.insert(make_edge(e.first, e.second));
  std::set<AnchorLink> link_set(net.anchor_links.begin(), net.anchor_links.end());

  for (const auto& e : edge_set) {
    if (instance.measurements.ranges.find(e) == instance.measurements.ranges.end()) {
      add(report, "missing_range", "no range for edge " + edge_str(e));
    }
  }
  for (const auto& [edge, d] : instance.measurements.ranges) {
    if (edge_set.find(edge) == edge_set.end()) {
      add(report, "unknown_range_key", "range for non-edge " + edge_str(edge));
    }
    if (!std::isfinite(d)) {
      add(report, "nonfinite_range", "non-finite range for edge " + edge_str(edge));
    } else if (d < 0.0) {
      add(report, "negative_range", "negative range for edge " + edge_str(edge));
    }
  }

  for (const auto& l : link_set) {
    if (instance.measurements.anchor_ranges.find(l) == instance.measurements.anchor_ranges.end()) {
      add(report, "missing_anchor_range", "no range for anchor link " + link_str(l));
    }
  }
  for (const auto& [link, r] : instance.measurements.anchor_ranges) {
    if (link_set.find(link) == link_set.end()) {
      add(report, "unknown_anchor_range_key", "range for non-link " + link_str(link));
    }
    if (!std::isfinite(r)) {
      add(report, "nonfinite_range", "non-finite range for anchor link " + link_str(link));
    } else if (r < 0.0) {
      add(report, "negative_range", "negative range for anchor link " + link_str(link));
    }
  }

  if (instance.loss.family == Family::huber) {
    if (!(instance.loss.huber_radius > 0.0)) {
      add(report, "nonpositive_radius", "huber radius must be > 0");
    }
    for (const auto& [edge, radius] : instance.loss.edge_radius) {
      if (!(radius > 0.0)) {
        add(report, "nonpositive_radius", "huber radius override for edge " + edge_str(edge) + " must be > 0");
      }
      if (edge_set.find(edge) == edge_set.end()) {
        add(report, "unknown_radius_key", "radius override for non-edge " + edge_str(edge));
      }
    }
    for (const auto& [link, radius] : instance.loss.anchor_link_radius) {
      if (!(radius > 0.0)) {
        add(report, "nonpositive_radius",
            "huber radius override for anchor link " + link_str(link) + " must be > 0");
      }
      if (link_set.find(link) == link_set.end()) {
        add(report, "unknown_radius_key", "radius override for non-link " + link_str(link));
      }
    }
  }
  return report;
}

DegreeStats degree_stats(const Network& network) {
  DegreeStats stats;
  const int n = std::max(network.sensors, 0);
  stats.edge_degree.assign(n, 0);
  stats.combined_degree.assign(n, 0);
  for (const auto& [i, j] : network.edges) {
    if (i >= 0 && i < n) ++stats.edge_degree[i];
    if (j >= 0 && j < n) ++stats.edge_degree[j];
  }
  for (int i = 0; i < n; ++i) stats.combined_degree[i] = stats.edge_degree[i];
  for (const auto& [i, k] : network.anchor_links) {
    (void)k;
    if (i >= 0 && i < n) ++stats.combined_degree[i];
  }
  if (n > 0) {
    double sum_edge = 0.0, sum_combined = 0.0;
    for (int i = 0; i < n; ++i) {
      sum_edge += stats.edge_degree[i];
      sum_combined += stats.combined_degree[i];
    }
    stats.edge_average = sum_edge / n;
    stats.combined_average = sum_combined / n;
  }
  return stats;
}

}  // namespace netloc
