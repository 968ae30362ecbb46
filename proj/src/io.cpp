#include "gsi/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsi {

using nlohmann::json;

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

WeightedGraph parse_graph_json(const std::string& text) {
  json doc = json::parse(text);
  int n = doc.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : doc.at("edges"))
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());

  auto vec = [&](const char* key, int size,
                 double fallback) -> Eigen::VectorXd {
    if (!doc.contains(key)) return Eigen::VectorXd::Constant(size, fallback);
    auto values = doc.at(key).get<std::vector<double>>();
    if (static_cast<int>(values.size()) != size)
      throw std::runtime_error(std::string("graph json: bad length for ") +
                               key);
    return Eigen::Map<Eigen::VectorXd>(values.data(), size);
  };
  Eigen::VectorXd mu = vec("mu", n, 1.0);
  Eigen::VectorXd q = vec("q", n, 0.0);
  std::vector<double> g =
      doc.contains("g") ? doc.at("g").get<std::vector<double>>()
                        : std::vector<double>(edges.size(), 1.0);
  std::vector<std::string> labels;
  if (doc.contains("labels"))
    labels = doc.at("labels").get<std::vector<std::string>>();
  VertexSubset B;
  if (doc.contains("B")) B = doc.at("B").get<std::vector<int>>();
  return make_graph(n, std::move(edges), std::move(mu), std::move(g),
                    std::move(q), std::move(labels), std::move(B));
}

WeightedGraph load_graph_json(const std::string& path) {
  try {
    return parse_graph_json(read_file(path));
  } catch (const json::exception& err) {
    throw std::runtime_error(path + ": " + err.what());
  }
}

std::string graph_to_json(const WeightedGraph& graph) {
  json doc;
  doc["n"] = graph.n;
  json edges = json::array();
  for (const auto& [i, j] : graph.edges) edges.push_back({i, j});
  doc["edges"] = std::move(edges);
  doc["mu"] = std::vector<double>(graph.mu.data(), graph.mu.data() + graph.n);
  doc["g"] = graph.g;
  doc["q"] = std::vector<double>(graph.q.data(), graph.q.data() + graph.n);
  if (!graph.labels.empty()) doc["labels"] = graph.labels;
  if (!graph.B.empty()) doc["B"] = graph.B;
  return doc.dump(2) + "\n";
}

void save_graph_json(const WeightedGraph& graph, const std::string& path) {
  write_file(path, graph_to_json(graph));
}

WalkModel load_walk_model(const WeightedGraph& graph,
                          const std::string& conductancePath) {
  json doc = json::parse(read_file(conductancePath));
  std::vector<double> c = doc.at("c").get<std::vector<double>>();
  Eigen::VectorXd stay = Eigen::VectorXd::Zero(graph.n);
  if (doc.contains("cxx")) {
    auto values = doc.at("cxx").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != graph.n)
      throw std::runtime_error("walk model json: bad cxx length");
    stay = Eigen::Map<Eigen::VectorXd>(values.data(), graph.n);
  }
  return walk_from_conductances(graph, std::move(c), std::move(stay));
}

void save_spectral_csv(const InteriorSpectralData& data,
                       const std::string& path) {
  std::ostringstream out;
  out << "index,eigenvalue,group";
  for (int b : data.B) out << ",phi_v" << b;
  out << "\n";
  for (size_t gi = 0; gi < data.groups.size(); ++gi) {
    const auto& grp = data.groups[gi];
    for (int j = grp.first; j < grp.first + grp.count; ++j) {
      out << j << "," << format_g17(data.eigenvalues[j]) << "," << gi;
      for (int i = 0; i < data.phiOnB.rows(); ++i)
        out << "," << format_g17(data.phiOnB(i, j));
      out << "\n";
    }
  }
  write_file(path, out.str());
}

namespace {

const char* mode_name(KernelMode mode) {
  switch (mode) {
    case KernelMode::Discrete: return "discrete";
    case KernelMode::Continuous: return "continuous";
    case KernelMode::Schrodinger: return "schrodinger";
  }
  return "?";
}

KernelMode mode_from_name(const std::string& name) {
  if (name == "discrete") return KernelMode::Discrete;
  if (name == "continuous") return KernelMode::Continuous;
  if (name == "schrodinger") return KernelMode::Schrodinger;
  throw std::runtime_error("unknown kernel mode: " + name);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::istringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

void save_heat_table_csv(const HeatKernelTable& table,
                         const std::string& path) {
  std::ostringstream out;
  out << "# mode=" << mode_name(table.mode) << " dt=" << format_g17(table.timeStep)
      << " B=";
  for (size_t i = 0; i < table.B.size(); ++i)
    out << (i ? ";" : "") << table.B[i];
  out << " muB=";
  for (int i = 0; i < table.muOnB.size(); ++i)
    out << (i ? ";" : "") << format_g17(table.muOnB[i]);
  out << "\n";
  const bool complexMode = table.mode == KernelMode::Schrodinger;
  out << (complexMode ? "y,z,t,re,im\n" : "y,z,t,value\n");
  const int m = static_cast<int>(table.B.size());
  for (int t = 0; t < table.steps(); ++t)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        out << table.B[i] << "," << table.B[j] << "," << t;
        if (complexMode)
          out << "," << format_g17(table.cframes[t](i, j).real()) << ","
              << format_g17(table.cframes[t](i, j).imag());
        else
          out << "," << format_g17(table.frames[t](i, j));
        out << "\n";
      }
  write_file(path, out.str());
}

HeatKernelTable load_heat_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  HeatKernelTable table;
  {
    std::istringstream ss(header);
    std::string token;
    while (ss >> token) {
      if (token.rfind("mode=", 0) == 0)
        table.mode = mode_from_name(token.substr(5));
      else if (token.rfind("dt=", 0) == 0)
        table.timeStep = std::stod(token.substr(3));
      else if (token.rfind("B=", 0) == 0)
        for (const auto& part : split(token.substr(2), ';'))
          table.B.push_back(std::stoi(part));
      else if (token.rfind("muB=", 0) == 0) {
        auto parts = split(token.substr(4), ';');
        table.muOnB.resize(static_cast<int>(parts.size()));
        for (size_t i = 0; i < parts.size(); ++i)
          table.muOnB[static_cast<int>(i)] = std::stod(parts[i]);
      }
    }
  }
  std::string line;
  std::getline(in, line);  // column header
  const int m = static_cast<int>(table.B.size());
  const bool complexMode = table.mode == KernelMode::Schrodinger;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split(line, ',');
    int i = 0, j = 0, t = std::stoi(parts[2]);
    for (int k = 0; k < m; ++k) {
      if (table.B[k] == std::stoi(parts[0])) i = k;
      if (table.B[k] == std::stoi(parts[1])) j = k;
    }
    if (complexMode) {
      while (static_cast<int>(table.cframes.size()) <= t)
        table.cframes.emplace_back(Eigen::MatrixXcd::Zero(m, m));
      table.cframes[t](i, j) = {std::stod(parts[3]), std::stod(parts[4])};
    } else {
      while (static_cast<int>(table.frames.size()) <= t)
        table.frames.emplace_back(Eigen::MatrixXd::Zero(m, m));
      table.frames[t](i, j) = std::stod(parts[3]);
    }
  }
  return table;
}

void save_passing_table_csv(const PassingTimeTable& table,
                            const std::string& path) {
  std::ostringstream out;
  out << "# B=";
  for (size_t i = 0; i < table.B.size(); ++i)
    out << (i ? ";" : "") << table.B[i];
  out << " tmax=" << table.tMax << "\n";
  out << "t,x,y,r\n";
  const int m = static_cast<int>(table.B.size());
  for (int t = 1; t <= table.tMax; ++t)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out << t << "," << table.B[i] << "," << table.B[j] << ","
            << format_g17(table.r[t - 1](i, j)) << "\n";
  write_file(path, out.str());
}

PassingTimeTable load_passing_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  PassingTimeTable table;
  {
    std::istringstream ss(header);
    std::string token;
    while (ss >> token) {
      if (token.rfind("B=", 0) == 0)
        for (const auto& part : split(token.substr(2), ';'))
          table.B.push_back(std::stoi(part));
      else if (token.rfind("tmax=", 0) == 0)
        table.tMax = std::stoi(token.substr(5));
    }
  }
  const int m = static_cast<int>(table.B.size());
  table.r.assign(table.tMax, Eigen::MatrixXd::Zero(m, m));
  std::string line;
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split(line, ',');
    int t = std::stoi(parts[0]);
    int i = table.index_of(std::stoi(parts[1]));
    int j = table.index_of(std::stoi(parts[2]));
    table.r[t - 1](i, j) = std::stod(parts[3]);
  }
  return table;
}

void save_poles_csv(const PoleEstimate& poles, const std::string& path) {
  std::ostringstream out;
  out << "# nEstimated=" << poles.nEstimated
      << " psdProjection=" << format_g17(poles.psdProjectionDistance)
      << " fitResidual=" << format_g17(poles.fitResidual) << " sigma=";
  for (int i = 0; i < poles.singularValues.size(); ++i)
    out << (i ? ";" : "") << format_g17(poles.singularValues[i]);
  out << "\n";
  out << "base_re,base_im,group,residue\n";
  for (size_t k = 0; k < poles.modes.size(); ++k) {
    const auto& mode = poles.modes[k];
    out << format_g17(mode.base.real()) << "," << format_g17(mode.base.imag())
        << "," << k;
    for (int i = 0; i < mode.residue.rows(); ++i)
      for (int j = 0; j < mode.residue.cols(); ++j)
        out << "," << format_g17(mode.residue(i, j));
    out << "\n";
  }
  write_file(path, out.str());
}

void save_trajectory(const ObservedTrajectory& obs, const std::string& path) {
  std::ostringstream out;
  for (int s : obs.symbols) {
    if (s == kHiddenState)
      out << "*\n";
    else
      out << s << "\n";
  }
  write_file(path, out.str());
}

ObservedTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ObservedTrajectory obs;
  std::string line;
  std::set<int> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "*") {
      obs.symbols.push_back(kHiddenState);
    } else {
      int v = std::stoi(line);
      obs.symbols.push_back(v);
      seen.insert(v);
    }
  }
  obs.B.assign(seen.begin(), seen.end());
  return obs;
}

void save_source_csv(const SourceTerm& source, const std::string& path) {
  std::ostringstream out;
  out << "t,z,value\n";
  for (int t = 0; t < source.horizon; ++t)
    for (size_t k = 0; k < source.support.size(); ++k)
      out << t << "," << source.support[k] << ","
          << format_g17(source.values(static_cast<int>(k), t)) << "\n";
  write_file(path, out.str());
}

}  // namespace gsi
