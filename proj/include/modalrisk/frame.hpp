#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "modalrisk/algebra.hpp"

namespace modalrisk {

class FrameError : public std::runtime_error {
 public:
  explicit FrameError(const std::string& what) : std::runtime_error(what) {}
};

// Measures must sum to 1 within this slack; degree comparisons in frame
// classification are exact.
inline constexpr double kMeasureTolerance = 1e-9;

// Graded proposition over an indexed world set. Values validated on
// construction and on every write.
class Proposition {
 public:
  Proposition() = default;
  explicit Proposition(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
      if (!in_unit_interval(v))
        throw ValueError("proposition degree out of [0,1]: " + std::to_string(v));
  }
  static Proposition constant(std::size_t n, double v) {
    return Proposition(std::vector<double>(n, (in_unit_interval(v)
        ? v
        : throw ValueError("constant degree out of [0,1]"))));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, double v) {
    if (!in_unit_interval(v))
      throw ValueError("proposition degree out of [0,1]: " + std::to_string(v));
    values_.at(i) = v;
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

inline void require_same_size(const Proposition& p, const Proposition& q) {
  if (p.size() != q.size())
    throw FrameError("proposition size mismatch: " + std::to_string(p.size()) +
                     " vs " + std::to_string(q.size()));
}

inline Proposition meet(const Proposition& p, const Proposition& q) {
  require_same_size(p, q);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = meet(p[i], q[i]);
  return Proposition(std::move(out));
}

inline Proposition join(const Proposition& p, const Proposition& q) {
  require_same_size(p, q);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = join(p[i], q[i]);
  return Proposition(std::move(out));
}

inline Proposition negate(const Proposition& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = negate(p[i]);
  return Proposition(std::move(out));
}

inline bool is_crisp(const Proposition& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0.0 && p[i] != 1.0) return false;
  return true;
}

// Pointwise p <= q up to tol; max_violation() gives the worst gap.
inline bool leq(const Proposition& p, const Proposition& q, double tol = 0.0) {
  require_same_size(p, q);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > q[i] + tol) return false;
  return true;
}

inline double max_violation(const Proposition& lhs, const Proposition& rhs) {
  require_same_size(lhs, rhs);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    worst = std::max(worst, lhs[i] - rhs[i]);
  return worst;
}

struct FrameProfile {
  bool crisp = false;
  bool reflexive = false;
  bool serial = false;
  bool symmetric = false;
  bool transitive = false;        // min-transitivity
  bool fuzzy_transitive = false;  // transitivity under the package t-norm
  bool euclidean = false;
  bool equivalence = false;       // reflexive + symmetric + min-transitive
};

// Finite evidence frame: named worlds, named fuzzy relations (row-major,
// row = source world), named propositions, optional per-world measures.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<std::string> worlds) : worlds_(std::move(worlds)) {
    if (worlds_.empty()) throw FrameError("frame needs at least one world");
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
      if (worlds_[i].empty()) throw FrameError("empty world name");
      if (!index_.emplace(worlds_[i], i).second)
        throw FrameError("duplicate world name: " + worlds_[i]);
    }
  }

  std::size_t world_count() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(std::size_t i) const { return worlds_.at(i); }

  std::size_t world_index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
      throw FrameError("unknown world: " + std::string(name));
    return it->second;
  }

  void add_relation(const std::string& standard, std::vector<double> row_major) {
    const std::size_t n = world_count();
    if (standard.empty()) throw FrameError("empty standard name");
    if (row_major.size() != n * n)
      throw FrameError("relation " + standard + " must have " +
                       std::to_string(n * n) + " entries");
    for (double v : row_major)
      if (!in_unit_interval(v))
        throw ValueError("relation degree out of [0,1] in " + standard);
    relations_[standard] = std::move(row_major);
  }

  bool has_relation(std::string_view standard) const {
    return relations_.count(std::string(standard)) > 0;
  }

  std::vector<std::string> standards() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : relations_) out.push_back(k);
    return out;
  }

  double gamma(std::string_view standard, std::size_t from, std::size_t to) const {
    return relation(standard)[from * world_count() + to];
  }

  const std::vector<double>& relation(std::string_view standard) const {
    auto it = relations_.find(std::string(standard));
    if (it == relations_.end())
      throw FrameError("unknown standard: " + std::string(standard));
    return it->second;
  }

  void add_proposition(const std::string& name, Proposition p) {
    if (name.empty()) throw FrameError("empty proposition name");
    if (p.size() != world_count())
      throw FrameError("proposition " + name + " must have " +
                       std::to_string(world_count()) + " entries");
    propositions_[name] = std::move(p);
  }

  bool has_proposition(std::string_view name) const {
    return propositions_.count(std::string(name)) > 0;
  }

  const Proposition& proposition(std::string_view name) const {
    auto it = propositions_.find(std::string(name));
    if (it == propositions_.end())
      throw FrameError("unknown proposition: " + std::string(name));
    return it->second;
  }

  std::vector<std::string> proposition_names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : propositions_) out.push_back(k);
    return out;
  }

  void set_measure(std::string_view world, std::vector<double> mu) {
    const std::size_t w = world_index(world);
    if (mu.size() != world_count())
      throw FrameError("measure for " + std::string(world) + " must have " +
                       std::to_string(world_count()) + " entries");
    double total = 0.0;
    for (double v : mu) {
      if (v < 0.0) throw ValueError("negative measure weight");
      total += v;
    }
    if (std::abs(total - 1.0) > kMeasureTolerance)
      throw ValueError("measure for " + std::string(world) +
                       " sums to " + std::to_string(total));
    measures_[w] = std::move(mu);
  }

  bool has_measure(std::size_t world) const { return measures_.count(world) > 0; }

  const std::vector<double>& measure(std::size_t world) const {
    auto it = measures_.find(world);
    if (it == measures_.end())
      throw FrameError("no measure at world " + world_name(world));
    return it->second;
  }

  // Stored measure if present, else uniform over the crisp neighborhood of
  // `standard` at `world`. Fuzzy rows or empty neighborhoods have no default.
  std::vector<double> measure_or_uniform(std::string_view standard,
                                         std::size_t world) const {
    if (has_measure(world)) return measure(world);
    const std::size_t n = world_count();
    std::vector<double> mu(n, 0.0);
    std::size_t support = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const double g = gamma(standard, world, v);
      if (g != 0.0 && g != 1.0)
        throw FrameError("no measure at " + world_name(world) +
                         " and relation " + std::string(standard) + " is fuzzy");
      if (g == 1.0) {
        mu[v] = 1.0;
        ++support;
      }
    }
    if (support == 0)
      throw FrameError("no measure at " + world_name(world) +
                       " and empty neighborhood");
    for (double& v : mu) v /= static_cast<double>(support);
    return mu;
  }

  static Frame from_json(const nlohmann::json& doc);
  static Frame from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw FrameError(std::string("frame document is not valid JSON: ") + e.what());
    }
    return from_json(doc);
  }
  static Frame from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FrameError("cannot open frame file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
  }
  nlohmann::json to_json() const;

 private:
  std::vector<std::string> worlds_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<double>> relations_;
  std::map<std::string, Proposition> propositions_;
  std::map<std::size_t, std::vector<double>> measures_;
};

inline Frame Frame::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FrameError("frame document must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key != "worlds" && key != "relations" && key != "propositions" &&
        key != "measures")
      throw FrameError("unknown frame field: " + key);
  }
  if (!doc.contains("worlds") || !doc["worlds"].is_array())
    throw FrameError("frame document needs a \"worlds\" array");
  std::vector<std::string> worlds;
  for (const auto& w : doc["worlds"]) {
    if (!w.is_string()) throw FrameError("world names must be strings");
    worlds.push_back(w.get<std::string>());
  }
  Frame f(std::move(worlds));
  const std::size_t n = f.world_count();

  if (doc.contains("relations")) {
    if (!doc["relations"].is_object())
      throw FrameError("\"relations\" must map standards to matrices");
    for (const auto& [name, mat] : doc["relations"].items()) {
      if (!mat.is_array() || mat.size() != n)
        throw FrameError("relation " + name + " must have one row per world");
      std::vector<double> flat;
      flat.reserve(n * n);
      for (const auto& row : mat) {
        if (!row.is_array() || row.size() != n)
          throw FrameError("relation " + name + " row length must equal world count");
        for (const auto& cell : row) {
          if (!cell.is_number())
            throw FrameError("relation " + name + " entries must be numbers");
          flat.push_back(cell.get<double>());
        }
      }
      f.add_relation(name, std::move(flat));
    }
  }

  if (doc.contains("propositions")) {
    if (!doc["propositions"].is_object())
      throw FrameError("\"propositions\" must map names to degree vectors");
    for (const auto& [name, vec] : doc["propositions"].items()) {
      if (!vec.is_array())
        throw FrameError("proposition " + name + " must be an array");
      std::vector<double> vals;
      for (const auto& cell : vec) {
        if (!cell.is_number())
          throw FrameError("proposition " + name + " entries must be numbers");
        vals.push_back(cell.get<double>());
      }
      f.add_proposition(name, Proposition(std::move(vals)));
    }
  }

  if (doc.contains("measures")) {
    if (!doc["measures"].is_object())
      throw FrameError("\"measures\" must map world names to weight vectors");
    for (const auto& [world, vec] : doc["measures"].items()) {
      if (!vec.is_array())
        throw FrameError("measure for " + world + " must be an array");
      std::vector<double> mu;
      for (const auto& cell : vec) {
        if (!cell.is_number())
          throw FrameError("measure for " + world + " entries must be numbers");
        mu.push_back(cell.get<double>());
      }
      f.set_measure(world, std::move(mu));
    }
  }
  return f;
}

inline nlohmann::json Frame::to_json() const {
  nlohmann::ordered_json doc;
  doc["worlds"] = worlds_;
  const std::size_t n = world_count();
  nlohmann::ordered_json rels = nlohmann::ordered_json::object();
  for (const auto& [name, flat] : relations_) {
    nlohmann::ordered_json mat = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i)
      mat.push_back(std::vector<double>(flat.begin() + i * n,
                                        flat.begin() + (i + 1) * n));
    rels[name] = std::move(mat);
  }
  doc["relations"] = std::move(rels);
  nlohmann::ordered_json props = nlohmann::ordered_json::object();
  for (const auto& [name, p] : propositions_) props[name] = p.values();
  doc["propositions"] = std::move(props);
  if (!measures_.empty()) {
    nlohmann::ordered_json ms = nlohmann::ordered_json::object();
    for (const auto& [w, mu] : measures_) ms[world_name(w)] = mu;
    doc["measures"] = std::move(ms);
  }
  return doc;
}

// Frame construction from a parsed JSON document.
inline Frame build_finite_frame(const nlohmann::json& doc) {
  return Frame::from_json(doc);
}

// Crisp support of a relation row. Errors on fuzzy rows; the caller decides
// whether a fuzzy relation is acceptable.
inline std::vector<std::size_t> crisp_neighborhood(const Frame& f,
                                                    std::string_view standard,
                                                    std::size_t world) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < f.world_count(); ++v) {
    const double g = f.gamma(standard, world, v);
    if (g != 0.0 && g != 1.0)
      throw FrameError("relation " + std::string(standard) + " is fuzzy at " +
                       f.world_name(world));
    if (g == 1.0) out.push_back(v);
  }
  return out;
}

inline FrameProfile classify_frame(const Frame& f, std::string_view standard,
                                   const AlgebraPackage& pkg) {
  const std::size_t n = f.world_count();
  FrameProfile prof;
  prof.crisp = true;
  prof.reflexive = true;
  prof.serial = true;
  prof.symmetric = true;
  prof.transitive = true;
  prof.fuzzy_transitive = true;
  prof.euclidean = true;
  for (std::size_t w = 0; w < n; ++w) {
    double row_sup = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double g = f.gamma(standard, w, v);
      if (g != 0.0 && g != 1.0) prof.crisp = false;
      row_sup = std::max(row_sup, g);
      if (f.gamma(standard, v, w) != g) prof.symmetric = false;
    }
    if (f.gamma(standard, w, w) != 1.0) prof.reflexive = false;
    if (row_sup != 1.0) prof.serial = false;
  }
  for (std::size_t w = 0; w < n && (prof.transitive || prof.fuzzy_transitive ||
                                    prof.euclidean); ++w) {
    for (std::size_t u = 0; u < n; ++u) {
      const double gwu = f.gamma(standard, w, u);
      if (gwu == 0.0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        const double guv = f.gamma(standard, u, v);
        const double gwv = f.gamma(standard, w, v);
        if (std::min(gwu, guv) > gwv) prof.transitive = false;
        if (tnorm(pkg, gwu, guv) > gwv) prof.fuzzy_transitive = false;
        if (std::min(gwu, gwv) > guv) prof.euclidean = false;
      }
    }
  }
  prof.equivalence = prof.reflexive && prof.symmetric && prof.transitive;
  return prof;
}

struct MetricAxis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 2;  // grid points per axis

  double coordinate(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(steps - 1);
  }
};

// Tolerance-ball frame over a product grid: worlds are grid points,
// gamma(w,v) = 1 iff sum_k weight_k * (x_k - x_k')^2 <= radius^2.
// Materializes the full matrix; meant for small grids.
struct MetricFrameSpec {
  std::vector<MetricAxis> axes;
  std::vector<double> weights;
  double radius = 0.0;
  std::string standard = "K";
};

inline Frame build_metric_frame(const MetricFrameSpec& spec) {
  if (spec.axes.empty()) throw FrameError("metric frame needs at least one axis");
  if (spec.weights.size() != spec.axes.size())
    throw FrameError("metric frame needs one weight per axis");
  for (double w : spec.weights)
    if (!(w > 0.0)) throw ValueError("metric weights must be positive");
  if (!(spec.radius > 0.0)) throw ValueError("metric radius must be positive");
  for (const auto& ax : spec.axes) {
    if (ax.steps < 2) throw FrameError("metric axis needs at least 2 steps");
    if (!(ax.hi > ax.lo)) throw FrameError("metric axis needs hi > lo");
  }

  std::size_t n = 1;
  for (const auto& ax : spec.axes) n *= ax.steps;

  std::vector<std::vector<std::size_t>> coords(n);
  std::vector<std::string> names(n);
  {
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::size_t w = 0; w < n; ++w) {
      coords[w] = idx;
      std::string name = "g";
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k) name += '_';
        name += std::to_string(idx[k]);
      }
      names[w] = std::move(name);
      for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < spec.axes[k].steps) break;
        idx[k] = 0;
      }
    }
  }

  Frame f(std::move(names));
  std::vector<double> rel(n * n, 0.0);
  const double r2 = spec.radius * spec.radius;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t v = 0; v < n; ++v) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < spec.axes.size(); ++k) {
        const double dx = spec.axes[k].coordinate(coords[w][k]) -
                          spec.axes[k].coordinate(coords[v][k]);
        d2 += spec.weights[k] * dx * dx;
      }
      if (d2 <= r2) rel[w * n + v] = 1.0;
    }
  }
  f.add_relation(spec.standard, std::move(rel));
  return f;
}

}  // namespace modalrisk
