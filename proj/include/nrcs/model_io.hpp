#pragma once

// JSON model documents and flat weight files.
//
// Model document (1-based vertex ids, unknown keys rejected):
//   { "n": 2, "r": 1, "A": [[0,1],[0,0]], "B": [[0],[1]], "C": [[1,0]],
//     "edges": [[1,2],[2,1]], "drivers": [1], "fashion": "siso|equal|multi",
//     "N": 2,                                            (optional)
//     "weights": {"k": 1, "values": {"1,2": 0.5}},       (optional; or a list, one per channel)
//     "hetero": {"pattern": [[0,0],[0,1]],               (optional)
//                "per_vertex": [{"dA": [[..]]} | {"A": .., "B": .., "C": ..}, ...]} }
//
// Weights file: flat map "i,j[,k]" -> real, k the 1-based channel (default 1).

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrcs/error.hpp"
#include "nrcs/model.hpp"

namespace nrcs {

using json = nlohmann::json;

namespace io_detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), ErrorKind::kParse, where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(allowed.count(it.key()) != 0, ErrorKind::kParse, "unknown key '" + it.key() + "' in " + where);
  }
}

inline const json& need(const json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  require(it != j.end(), ErrorKind::kParse, "missing key '" + key + "' in " + where);
  return *it;
}

inline int as_int(const json& v, const std::string& key) {
  require(v.is_number_integer(), ErrorKind::kParse, "key '" + key + "': expected an integer");
  return v.get<int>();
}

inline Matrix as_matrix(const json& v, const std::string& key) {
  require(v.is_array(), ErrorKind::kParse, "key '" + key + "': expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  Eigen::Index cols = -1;
  Matrix out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[i];
    require(row.is_array(), ErrorKind::kParse, "key '" + key + "': row " + std::to_string(i + 1) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    }
    require(static_cast<Eigen::Index>(row.size()) == cols, ErrorKind::kParse,
            "key '" + key + "': ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      require(row[c].is_number(), ErrorKind::kParse,
              "key '" + key + "': entry (" + std::to_string(i + 1) + "," + std::to_string(c + 1) + ") is not a number");
      out(i, c) = row[c].get<double>();
    }
  }
  if (rows == 0) out.resize(0, 0);
  return out;
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<int> parse_key_ids(const std::string& key) {
  std::vector<int> ids;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      require(used == part.size(), ErrorKind::kParse, "bad weight key '" + key + "'");
      ids.push_back(v);
    } catch (const std::logic_error&) {
      fail(ErrorKind::kParse, "bad weight key '" + key + "' (expected \"i,j\" or \"i,j,k\")");
    }
  }
  require(ids.size() == 2 || ids.size() == 3, ErrorKind::kParse,
          "bad weight key '" + key + "' (expected \"i,j\" or \"i,j,k\")");
  return ids;
}

inline std::string edge_key(const Edge& e) { return std::to_string(e.first) + "," + std::to_string(e.second); }

}  // namespace io_detail

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, source + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kParse, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

/// Builds a weight assignment from per-channel edge maps (channel index 0-based).
inline WeightAssignment weights_from_channels(const DiGraph& g, Fashion fashion, int r,
                                              const std::map<int, std::map<Edge, double>>& channels) {
  WeightAssignment w = WeightAssignment::zeros(g, fashion, r);
  for (const auto& [k, values] : channels) {
    require(k >= 0 && k < static_cast<int>(w.channels.size()), ErrorKind::kInvalidInput,
            "channel " + std::to_string(k + 1) + " out of range for fashion '" + to_string(fashion) + "'");
    w.channels[k] = edge_vector(g, values);
  }
  return w;
}

/// Parses a flat "i,j[,k]" -> weight map.
inline WeightAssignment parse_weights_json(const json& j, const DiGraph& g, Fashion fashion, int r) {
  require(j.is_object(), ErrorKind::kParse, "weights file must be a JSON object");
  std::map<int, std::map<Edge, double>> channels;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::vector<int> ids = io_detail::parse_key_ids(it.key());
    require(it.value().is_number(), ErrorKind::kParse, "weight '" + it.key() + "' is not a number");
    const int k = ids.size() == 3 ? ids[2] : 1;
    channels[k - 1][{ids[0], ids[1]}] = it.value().get<double>();
  }
  return weights_from_channels(g, fashion, r, channels);
}

inline json weights_to_json(const DiGraph& g, const WeightAssignment& w) {
  json out = json::object();
  const bool multi = w.fashion == Fashion::kMultiWeighted;
  for (std::size_t k = 0; k < w.channels.size(); ++k) {
    for (int e = 0; e < g.edge_count(); ++e) {
      std::string key = io_detail::edge_key(g.edges()[e]);
      if (multi) key += "," + std::to_string(k + 1);
      out[key] = w.channels[k](e);
    }
  }
  return out;
}

inline Model parse_model(const json& doc) {
  using namespace io_detail;
  check_keys(doc, {"n", "r", "A", "B", "C", "edges", "drivers", "fashion", "N", "weights", "hetero"}, "model");
  Model model;
  const int n = as_int(need(doc, "n", "model"), "n");
  const int r = as_int(need(doc, "r", "model"), "r");
  require(n >= 1, ErrorKind::kParse, "key 'n': must be at least 1");
  require(r >= 1, ErrorKind::kParse, "key 'r': must be at least 1");
  model.sub.A = as_matrix(need(doc, "A", "model"), "A");
  model.sub.B = as_matrix(need(doc, "B", "model"), "B");
  model.sub.C = as_matrix(need(doc, "C", "model"), "C");
  require(model.sub.A.rows() == n && model.sub.A.cols() == n, ErrorKind::kParse, "key 'A': expected n x n");
  require(model.sub.B.rows() == n && model.sub.B.cols() == r, ErrorKind::kParse, "key 'B': expected n x r");
  require(model.sub.C.rows() == r && model.sub.C.cols() == n, ErrorKind::kParse, "key 'C': expected r x n");

  const json& fashion = need(doc, "fashion", "model");
  require(fashion.is_string(), ErrorKind::kParse, "key 'fashion': expected a string");
  try {
    model.fashion = parse_fashion(fashion.get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::kParse, std::string("key 'fashion': ") + e.what());
  }

  const json& edges = need(doc, "edges", "model");
  require(edges.is_array(), ErrorKind::kParse, "key 'edges': expected an array of [i,j] pairs");
  std::vector<Edge> edge_list;
  int max_id = 0;
  for (const json& e : edges) {
    require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer(),
            ErrorKind::kParse, "key 'edges': every entry must be an [i,j] pair of integers");
    edge_list.emplace_back(e[0].get<int>(), e[1].get<int>());
    max_id = std::max({max_id, e[0].get<int>(), e[1].get<int>()});
  }
  const json& drivers = need(doc, "drivers", "model");
  require(drivers.is_array(), ErrorKind::kParse, "key 'drivers': expected an array of vertex ids");
  VertexSet driver_list;
  for (const json& d : drivers) {
    driver_list.push_back(as_int(d, "drivers"));
    max_id = std::max(max_id, driver_list.back());
  }
  int N = max_id;
  if (doc.contains("N")) {
    N = as_int(doc["N"], "N");
    require(N >= max_id, ErrorKind::kParse, "key 'N': smaller than the largest vertex id used");
  }
  require(N >= 1, ErrorKind::kParse, "model has no vertices");
  try {
    model.topo = NetworkTopology(DiGraph(N, edge_list), driver_list);
  } catch (const Error& e) {
    fail(ErrorKind::kParse, std::string("keys 'edges'/'drivers': ") + e.what());
  }

  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    const json list = w.is_array() ? w : json::array({w});
    std::map<int, std::map<Edge, double>> channels;
    for (const json& entry : list) {
      check_keys(entry, {"k", "values"}, "weights");
      const int k = entry.contains("k") ? as_int(entry["k"], "weights.k") : 1;
      const json& values = need(entry, "values", "weights");
      require(values.is_object(), ErrorKind::kParse, "key 'weights.values': expected an object");
      for (auto it = values.begin(); it != values.end(); ++it) {
        const std::vector<int> ids = parse_key_ids(it.key());
        require(ids.size() == 2, ErrorKind::kParse, "key 'weights.values': keys must be \"i,j\"");
        require(it.value().is_number(), ErrorKind::kParse, "weight '" + it.key() + "' is not a number");
        channels[k - 1][{ids[0], ids[1]}] = it.value().get<double>();
      }
    }
    try {
      model.weights = weights_from_channels(model.topo.graph, model.fashion, r, channels);
    } catch (const Error& e) {
      fail(ErrorKind::kParse, std::string("key 'weights': ") + e.what());
    }
  }

  if (doc.contains("hetero")) {
    const json& h = doc["hetero"];
    check_keys(h, {"pattern", "per_vertex"}, "hetero");
    std::vector<Matrix> deltas;
    HeteroSubsystemList triples;
    if (h.contains("per_vertex")) {
      const json& pv = h["per_vertex"];
      require(pv.is_array() && static_cast<int>(pv.size()) == N, ErrorKind::kParse,
              "key 'hetero.per_vertex': expected one entry per vertex");
      for (const json& entry : pv) {
        check_keys(entry, {"dA", "A", "B", "C"}, "hetero.per_vertex");
        if (entry.contains("dA")) {
          require(!entry.contains("A"), ErrorKind::kParse, "hetero.per_vertex: give either dA or A/B/C");
          deltas.push_back(as_matrix(entry["dA"], "hetero.per_vertex.dA"));
        } else {
          const Matrix A = as_matrix(need(entry, "A", "hetero.per_vertex"), "hetero.per_vertex.A");
          const Matrix B = as_matrix(need(entry, "B", "hetero.per_vertex"), "hetero.per_vertex.B");
          const Matrix C = as_matrix(need(entry, "C", "hetero.per_vertex"), "hetero.per_vertex.C");
          require(B.cols() == 1 && C.rows() == 1, ErrorKind::kParse,
                  "hetero.per_vertex: B must be a column and C a row");
          triples.push_back({A, B.col(0), C.row(0)});
        }
      }
      require(deltas.empty() || triples.empty(), ErrorKind::kParse,
              "hetero.per_vertex: entries must be all dA or all A/B/C");
    }
    if (h.contains("pattern")) {
      const Matrix mask = as_matrix(h["pattern"], "hetero.pattern");
      require(mask.rows() == n && mask.cols() == n, ErrorKind::kParse, "key 'hetero.pattern': expected n x n");
      require(triples.empty(), ErrorKind::kParse, "hetero: a pattern cannot be combined with A/B/C triples");
      model.perturbation = HeteroPerturbation{nonzero_pattern(mask), deltas};
    } else if (!deltas.empty()) {
      fail(ErrorKind::kParse, "hetero: dA realizations require a pattern");
    }
    if (!triples.empty()) model.hetero = triples;
  }

  try {
    model.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kParse, e.what());
  }
  return model;
}

inline Model parse_model_text(const std::string& text, const std::string& source = "model") {
  return parse_model(parse_json_text(text, source));
}

inline Model load_model(const std::string& path) { return parse_model(read_json_file(path)); }

inline json model_to_json(const Model& model) {
  using io_detail::matrix_json;
  json doc;
  doc["n"] = model.sub.n();
  doc["r"] = model.sub.r();
  doc["A"] = matrix_json(model.sub.A);
  doc["B"] = matrix_json(model.sub.B);
  doc["C"] = matrix_json(model.sub.C);
  doc["N"] = model.N();
  json edges = json::array();
  for (const Edge& e : model.topo.graph.edges()) edges.push_back({e.first, e.second});
  doc["edges"] = edges;
  doc["drivers"] = model.topo.drivers;
  doc["fashion"] = to_string(model.fashion);
  if (model.weights) {
    json list = json::array();
    for (std::size_t k = 0; k < model.weights->channels.size(); ++k) {
      json values = json::object();
      for (int e = 0; e < model.topo.graph.edge_count(); ++e) {
        values[io_detail::edge_key(model.topo.graph.edges()[e])] = model.weights->channels[k](e);
      }
      list.push_back({{"k", static_cast<int>(k) + 1}, {"values", values}});
    }
    doc["weights"] = list.size() == 1 ? list[0] : list;
  }
  if (model.perturbation || model.hetero) {
    json h = json::object();
    json per_vertex = json::array();
    if (model.perturbation) {
      h["pattern"] = matrix_json(model.perturbation->mask.cast<double>());
      for (const Matrix& d : model.perturbation->realizations) per_vertex.push_back({{"dA", matrix_json(d)}});
    }
    if (model.hetero) {
      for (const HeteroSubsystem& s : *model.hetero) {
        per_vertex.push_back({{"A", matrix_json(s.A)}, {"B", matrix_json(s.b)}, {"C", matrix_json(s.c)}});
      }
    }
    if (!per_vertex.empty()) h["per_vertex"] = per_vertex;
    doc["hetero"] = h;
  }
  return doc;
}

}  // namespace nrcs
