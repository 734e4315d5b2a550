#include "ridgebart/serialize.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ridgebart/errors.hpp"

namespace ridgebart {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "ridgebart-model";

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json branching_json(const Branching& b) {
  if (b.kind == Branching::Kind::kPower) return {{"kind", "power"}, {"base", b.base}, {"exponent", b.exponent}};
  return {{"kind", "geometric"}, {"gamma", b.gamma}};
}

Branching branching_from(const json& j) {
  Branching b;
  if (j.at("kind").get<std::string>() == "power") {
    b.kind = Branching::Kind::kPower;
    b.base = j.at("base").get<double>();
    b.exponent = j.at("exponent").get<double>();
  } else {
    b.kind = Branching::Kind::kGeometric;
    b.gamma = j.at("gamma").get<double>();
  }
  return b;
}

json config_to_json(const PriorConfig& c, Outcome outcome) {
  return {{"outcome", to_string(outcome)},
          {"trees", c.num_trees},
          {"ridge", c.num_ridge},
          {"activation", to_string(c.activation)},
          {"tau", c.tau},
          {"nu", c.nu},
          {"lambda", c.lambda},
          {"nu_sigma", c.nu_sigma},
          {"lambda_sigma", c.lambda_sigma},
          {"branching", branching_json(c.branching)},
          {"rotate_omega", c.rotate_omega},
          {"omega_base_cov", c.omega_base_cov}};
}

PriorConfig config_from(const json& j) {
  PriorConfig c;
  c.num_trees = j.at("trees").get<int>();
  c.num_ridge = j.at("ridge").get<int>();
  c.activation = parse_activation(j.at("activation").get<std::string>());
  c.tau = j.at("tau").get<double>();
  c.nu = j.at("nu").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.nu_sigma = j.at("nu_sigma").get<double>();
  c.lambda_sigma = j.at("lambda_sigma").get<double>();
  c.branching = branching_from(j.at("branching"));
  c.rotate_omega = j.at("rotate_omega").get<bool>();
  c.omega_base_cov = j.at("omega_base_cov").get<std::vector<double>>();
  return c;
}

json column_json(const ColumnTransform& t) {
  if (t.categorical) return {{"name", t.name}, {"kind", "categorical"}, {"levels", t.levels}};
  return {{"name", t.name}, {"kind", "continuous"}, {"min", t.min}, {"max", t.max}};
}

ColumnTransform column_from(const json& j) {
  ColumnTransform t;
  t.name = j.at("name").get<std::string>();
  t.categorical = j.at("kind").get<std::string>() == "categorical";
  if (t.categorical) {
    t.levels = j.at("levels").get<std::vector<std::string>>();
  } else {
    t.min = j.at("min").get<double>();
    t.max = j.at("max").get<double>();
  }
  return t;
}

json transform_json(const TransformRecord& t) {
  json xs = json::array(), zs = json::array();
  for (const auto& c : t.x_columns) xs.push_back(column_json(c));
  for (const auto& c : t.z_columns) zs.push_back(column_json(c));
  return {{"x_columns", xs},     {"z_columns", zs},  {"outcome_column", t.outcome_column},
          {"outcome", to_string(t.outcome)}, {"y_center", t.y_center}, {"y_min", t.y_min},
          {"y_max", t.y_max}};
}

TransformRecord transform_from(const json& j) {
  TransformRecord t;
  for (const auto& c : j.at("x_columns")) t.x_columns.push_back(column_from(c));
  for (const auto& c : j.at("z_columns")) t.z_columns.push_back(column_from(c));
  t.outcome_column = j.at("outcome_column").get<std::string>();
  t.outcome = parse_outcome(j.at("outcome").get<std::string>());
  t.y_center = j.at("y_center").get<double>();
  t.y_min = j.at("y_min").get<double>();
  t.y_max = j.at("y_max").get<double>();
  return t;
}

json tree_json(const RidgeTree& tree) {
  json nodes = json::array();
  for (const auto& [id, node] : tree.nodes()) {
    json n = {{"id", id}};
    if (node.is_leaf) {
      const LeafParams& leaf = node.leaf;
      json omega = json::array();
      for (Eigen::Index c = 0; c < leaf.omega.cols(); ++c) omega.push_back(vector_json(leaf.omega.col(c)));
      n["rho"] = leaf.rho;
      n["omega"] = omega;
      n["b"] = vector_json(leaf.offsets);
      n["beta"] = vector_json(leaf.beta);
    } else {
      n["var"] = node.rule.variable;
      if (node.rule.categorical) {
        std::vector<int> levels;
        for (int k = 0; k < 64; ++k)
          if ((node.rule.left_levels >> k) & 1ULL) levels.push_back(k);
        n["left_levels"] = levels;
      } else {
        n["cut"] = node.rule.cutpoint;
      }
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

RidgeTree tree_from(const json& nodes, std::size_t q) {
  std::map<NodeId, TreeNode> table;
  for (const auto& n : nodes) {
    TreeNode node;
    NodeId id = n.at("id").get<NodeId>();
    node.is_leaf = n.contains("beta");
    if (node.is_leaf) {
      LeafParams& leaf = node.leaf;
      leaf.rho = n.at("rho").get<double>();
      leaf.offsets = vector_from(n.at("b"));
      leaf.beta = vector_from(n.at("beta"));
      const json& omega = n.at("omega");
      leaf.omega.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(omega.size()));
      for (std::size_t c = 0; c < omega.size(); ++c) {
        if (omega[c].size() != q) throw InvariantViolationError("omega column has the wrong length");
        leaf.omega.col(static_cast<Eigen::Index>(c)) = vector_from(omega[c]);
      }
    } else {
      node.rule.variable = n.at("var").get<int>();
      if (n.contains("left_levels")) {
        node.rule.categorical = true;
        for (int k : n.at("left_levels").get<std::vector<int>>()) node.rule.left_levels |= 1ULL << k;
      } else {
        node.rule.cutpoint = n.at("cut").get<double>();
      }
    }
    if (!table.emplace(id, std::move(node)).second) throw InvariantViolationError("duplicate node id");
  }
  try {
    return RidgeTree::from_nodes(std::move(table));
  } catch (const TreeStructureError& e) {
    throw InvariantViolationError(e.what());
  }
}

}  // namespace

std::string config_json(const PriorConfig& config, Outcome outcome) { return config_to_json(config, outcome).dump(); }

std::string serialize(const PosteriorSamples& s) {
  json draws = json::array();
  for (std::size_t k = 0; k < s.draws.size(); ++k) {
    const Ensemble& e = s.draws[k];
    json trees = json::array();
    for (const auto& t : e.trees) trees.push_back(tree_json(t));
    draws.push_back({{"sigma2", e.sigma2}, {"trees", std::move(trees)}});
  }
  json j = {{"format", kFormatName},
            {"version", kModelFormatVersion},
            {"config", config_to_json(s.config, s.outcome)},
            {"config_hash", s.config_hash},
            {"seed", s.seed},
            {"chains", s.chains},
            {"iterations", s.iterations},
            {"burn_in", s.burn_in},
            {"thin", s.thin},
            {"transform", transform_json(s.transform)},
            {"draws", std::move(draws)}};
  return j.dump(1) + "\n";
}

PosteriorSamples deserialize(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    if (bytes.empty() || e.byte >= bytes.size()) throw TruncatedStreamError(fmt::format("truncated model stream: {}", e.what()));
    throw FormatError(fmt::format("malformed model stream: {}", e.what()));
  }
  PosteriorSamples s;
  try {
    if (!j.is_object() || j.value("format", std::string()) != kFormatName) throw FormatError("not a ridgebart model file");
    int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw VersionMismatchError(fmt::format("model version {} but this build reads {}", version, kModelFormatVersion));
    s.config = config_from(j.at("config"));
    s.outcome = parse_outcome(j.at("config").at("outcome").get<std::string>());
    s.config_hash = j.at("config_hash").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.chains = j.at("chains").get<int>();
    s.iterations = j.at("iterations").get<int>();
    s.burn_in = j.at("burn_in").get<int>();
    s.thin = j.at("thin").get<int>();
    s.transform = transform_from(j.at("transform"));
    const std::size_t q = s.transform.z_columns.size();
    for (const auto& d : j.at("draws")) {
      Ensemble e;
      e.sigma2 = d.at("sigma2").get<double>();
      e.y_center = s.transform.y_center;
      e.activation = s.config.activation;
      for (const auto& t : d.at("trees")) e.trees.push_back(tree_from(t, q));
      s.draws.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("malformed model stream: {}", e.what()));
  } catch (const ConfigError& e) {
    throw FormatError(fmt::format("malformed model stream: {}", e.what()));
  }
  s.validate();
  return s;
}

void save_model(const std::string& path, const PosteriorSamples& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  out << serialize(samples);
}

PosteriorSamples load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open model '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace ridgebart
