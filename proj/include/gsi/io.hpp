// File formats: the JSON graph format, walk-model extensions, and the CSV
// exports for spectral data, kernel tables, passing-time tables, pole
// estimates, trajectories and sources. All floating output uses 17
// significant digits so parsed values round-trip exactly.
#pragma once

#include <string>
#include <vector>

#include "gsi/equivalence.hpp"
#include "gsi/evolution.hpp"
#include "gsi/graph.hpp"
#include "gsi/randwalk.hpp"
#include "gsi/spectral.hpp"

namespace gsi {

std::string format_g17(double value);

/// Graph JSON object:
///   {"n": int, "edges": [[i,j],...], "mu": [reals], "g": [reals],
///    "q": [reals]?, "labels": [strings]?, "B": [ints]?}
WeightedGraph load_graph_json(const std::string& path);
void save_graph_json(const WeightedGraph& graph, const std::string& path);
WeightedGraph parse_graph_json(const std::string& text);
std::string graph_to_json(const WeightedGraph& graph);

/// Walk conductances JSON: {"c": [per-edge reals], "cxx": [per-vertex]?}.
/// Edge order follows the graph file. Missing file semantics are handled by
/// callers (walk_from_weights is the fallback).
WalkModel load_walk_model(const WeightedGraph& graph,
                          const std::string& conductancePath);

/// Spectral data CSV: index,eigenvalue,group,phi at each b in B's order.
void save_spectral_csv(const InteriorSpectralData& data,
                       const std::string& path);

/// Kernel table CSV: header line "# mode=<m> dt=<dt> B=<ids> muB=<vals>",
/// then y,z,t,value (value split into re,im for the schrodinger mode).
void save_heat_table_csv(const HeatKernelTable& table, const std::string& path);
HeatKernelTable load_heat_table_csv(const std::string& path);

/// Passing-time table CSV: header "# B=<ids> tmax=<T>", then t,x,y,r.
void save_passing_table_csv(const PassingTimeTable& table,
                            const std::string& path);
PassingTimeTable load_passing_table_csv(const std::string& path);

/// Pole estimate CSV: base_re,base_im,group,residue entries row-major.
void save_poles_csv(const PoleEstimate& poles, const std::string& path);

/// Trajectory file: one symbol per line, hidden state spelled "*".
void save_trajectory(const ObservedTrajectory& obs, const std::string& path);
ObservedTrajectory load_trajectory(const std::string& path);

/// Source CSV: t,z,value rows.
void save_source_csv(const SourceTerm& source, const std::string& path);

}  // namespace gsi
