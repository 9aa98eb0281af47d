#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hotstack/floorplan.hpp"
#include "hotstack/power_trace.hpp"
#include "hotstack/sparse.hpp"
#include "hotstack/stackup.hpp"

namespace hotstack {

/// Compact RC network of the die stack. Every material layer is an n x n
/// grid of cells over its own footprint; cells couple laterally within a
/// layer and vertically across layer interfaces by footprint overlap. All
/// footprints share a common center; coordinates are measured from it.
struct ThermalNetwork {
    struct Grid {
        MaterialRole role = MaterialRole::cmp_die;
        int n = 0;
        double pitch = 0.0;
        double extent = 0.0;
        double thickness = 0.0;
        double conductivity = 0.0;
        double vol_heat_capacity = 0.0;
        int node_offset = 0;
        int fp_layer = -1; ///< floorplan layer index for die grids
    };
    struct Edge {
        int a = 0;
        int b = 0;
        double g = 0.0; ///< W/K
    };

    std::vector<Grid> grids;
    std::vector<Edge> edges;
    std::vector<double> ground_g;    ///< per-node conductance to ambient
    std::vector<double> capacitance; ///< per-node J/K
    std::map<std::string, std::vector<std::pair<int, double>>> injection;
    int n_nodes = 0;
    double ambient_c = 20.0;
    double chip_side = 0.0;
    int lateral_edge_count = 0;
    int vertical_edge_count = 0;

    CsrMatrix matrix;              ///< conductance Laplacian + ground diagonal
    std::vector<int> diag_pos;     ///< CSR slot of each diagonal entry
    std::vector<double> base_diag; ///< diagonal of the steady-state matrix
    std::vector<double> inv_diag;  ///< Jacobi preconditioner of base_diag

    int grid_of(int node) const {
        for (size_t gi = 0; gi < grids.size(); ++gi) {
            const Grid& g = grids[gi];
            if (node >= g.node_offset && node < g.node_offset + g.n * g.n)
                return static_cast<int>(gi);
        }
        throw std::out_of_range("ThermalNetwork: node index out of range");
    }
};

namespace detail {

/// Lower cell boundary along one axis; index n gives the upper extent edge.
/// Centered form keeps mirrored cells bit-exact negations of each other.
inline double cell_lo(const ThermalNetwork::Grid& g, int idx) {
    return 0.5 * (2 * idx - g.n) * g.pitch;
}

inline double cell_center(const ThermalNetwork::Grid& g, int idx) {
    return 0.5 * (2 * idx + 1 - g.n) * g.pitch;
}

inline int node_index(const ThermalNetwork::Grid& g, int row, int col) {
    return g.node_offset + row * g.n + col;
}

/// First cell index of `g` whose interval may overlap [lo, hi).
inline int first_overlapping_cell(const ThermalNetwork::Grid& g, double lo) {
    const int guess = static_cast<int>(std::floor(lo / g.pitch + 0.5 * g.n)) - 1;
    return std::clamp(guess, 0, g.n - 1);
}

} // namespace detail

/// Builds the RC network for a floorplan over a material stack. The stack
/// is ordered bottom-to-top; die layers must match the floorplan layers
/// one-to-one and in order. Ground (convection to ambient) attaches to the
/// cells of the topmost layer, apportioned by area so the parallel
/// combination equals 1/convection_resistance. The bottom face and all side
/// walls are adiabatic.
inline ThermalNetwork build_network(const Floorplan3D& fp,
                                    const std::vector<MaterialLayer>& stack,
                                    const PackageSpec& pkg, int resolution) {
    pkg.validate();
    if (resolution < 2)
        throw std::invalid_argument("build_network: resolution must be >= 2");
    if (stack.empty())
        throw std::invalid_argument("build_network: stack is empty; missing roles cmp_die, sink");
    for (const MaterialLayer& layer : stack)
        layer.validate();

    // Die layers must correspond to floorplan layers, in order.
    std::vector<int> die_stack_index;
    for (size_t si = 0; si < stack.size(); ++si)
        if (stack[si].role == MaterialRole::cmp_die || stack[si].role == MaterialRole::dram_die)
            die_stack_index.push_back(static_cast<int>(si));
    if (die_stack_index.size() != fp.layers.size()) {
        std::ostringstream msg;
        msg << "build_network: stack has " << die_stack_index.size()
            << " die layers but the floorplan has " << fp.layers.size();
        throw std::invalid_argument(msg.str());
    }
    for (size_t li = 0; li < fp.layers.size(); ++li) {
        const MaterialLayer& die = stack[die_stack_index[li]];
        const bool want_cmp = fp.layers[li].role == LayerRole::cmp;
        if (want_cmp != (die.role == MaterialRole::cmp_die))
            throw std::invalid_argument(
                "build_network: die role mismatch at floorplan layer " + std::to_string(li));
        if (std::abs(die.extent_m - fp.side) > 1e-12)
            throw std::invalid_argument(
                "build_network: die extent differs from floorplan side at layer " +
                std::to_string(li));
    }
    for (size_t si = 0; si < stack.size(); ++si) {
        if (stack[si].role == MaterialRole::sink && si + 1 != stack.size())
            throw std::invalid_argument("build_network: sink must be the topmost layer");
        if (stack[si].role == MaterialRole::spreader) {
            if (si + 1 == stack.size() || stack[si + 1].role != MaterialRole::sink)
                throw std::invalid_argument(
                    "build_network: stack missing role sink above the spreader");
            if (!die_stack_index.empty() && static_cast<int>(si) < die_stack_index.back())
                throw std::invalid_argument("build_network: spreader must sit above all dies");
        }
    }

    ThermalNetwork net;
    net.ambient_c = pkg.ambient_c;
    net.chip_side = fp.side;

    int offset = 0;
    for (size_t si = 0; si < stack.size(); ++si) {
        const MaterialLayer& m = stack[si];
        ThermalNetwork::Grid g;
        g.role = m.role;
        g.n = resolution;
        g.extent = m.extent_m;
        g.pitch = m.extent_m / resolution;
        g.thickness = m.thickness_m;
        g.conductivity = m.conductivity_w_mk;
        g.vol_heat_capacity = m.vol_heat_capacity_j_m3k;
        g.node_offset = offset;
        offset += resolution * resolution;
        net.grids.push_back(g);
    }
    net.n_nodes = offset;
    for (size_t li = 0; li < fp.layers.size(); ++li)
        net.grids[die_stack_index[li]].fp_layer = static_cast<int>(li);

    net.ground_g.assign(net.n_nodes, 0.0);
    net.capacitance.assign(net.n_nodes, 0.0);

    // Lateral conduction: G = k * t * w / l with w = l = pitch on a uniform grid.
    for (const auto& g : net.grids) {
        const double lateral_g = g.conductivity * g.thickness;
        for (int row = 0; row < g.n; ++row) {
            for (int col = 0; col < g.n; ++col) {
                const int node = detail::node_index(g, row, col);
                if (col + 1 < g.n) {
                    net.edges.push_back({node, detail::node_index(g, row, col + 1), lateral_g});
                    ++net.lateral_edge_count;
                }
                if (row + 1 < g.n) {
                    net.edges.push_back({node, detail::node_index(g, row + 1, col), lateral_g});
                    ++net.lateral_edge_count;
                }
            }
        }
    }

    // Vertical conduction between adjacent layers: series half-thickness
    // resistances over the overlapping footprint area.
    for (size_t gi = 0; gi + 1 < net.grids.size(); ++gi) {
        const auto& lo = net.grids[gi];
        const auto& hi = net.grids[gi + 1];
        const double series_r =
            lo.thickness / (2.0 * lo.conductivity) + hi.thickness / (2.0 * hi.conductivity);
        if (lo.extent == hi.extent && lo.n == hi.n) {
            const double g_cell = lo.pitch * lo.pitch / series_r;
            for (int idx = 0; idx < lo.n * lo.n; ++idx) {
                net.edges.push_back({lo.node_offset + idx, hi.node_offset + idx, g_cell});
                ++net.vertical_edge_count;
            }
            continue;
        }
        const double area_floor = 1e-12 * std::min(lo.pitch, hi.pitch) * std::min(lo.pitch, hi.pitch);
        for (int row_a = 0; row_a < lo.n; ++row_a) {
            const double ay0 = detail::cell_lo(lo, row_a);
            const double ay1 = detail::cell_lo(lo, row_a + 1);
            for (int col_a = 0; col_a < lo.n; ++col_a) {
                const double ax0 = detail::cell_lo(lo, col_a);
                const double ax1 = detail::cell_lo(lo, col_a + 1);
                for (int row_b = detail::first_overlapping_cell(hi, ay0); row_b < hi.n; ++row_b) {
                    if (detail::cell_lo(hi, row_b) >= ay1)
                        break;
                    const double oy = std::min(ay1, detail::cell_lo(hi, row_b + 1)) -
                                      std::max(ay0, detail::cell_lo(hi, row_b));
                    if (oy <= 0.0)
                        continue;
                    for (int col_b = detail::first_overlapping_cell(hi, ax0); col_b < hi.n; ++col_b) {
                        if (detail::cell_lo(hi, col_b) >= ax1)
                            break;
                        const double ox = std::min(ax1, detail::cell_lo(hi, col_b + 1)) -
                                          std::max(ax0, detail::cell_lo(hi, col_b));
                        if (ox <= 0.0)
                            continue;
                        const double area = ox * oy;
                        if (area <= area_floor)
                            continue;
                        net.edges.push_back({detail::node_index(lo, row_a, col_a),
                                             detail::node_index(hi, row_b, col_b),
                                             area / series_r});
                        ++net.vertical_edge_count;
                    }
                }
            }
        }
    }

    // Convection to ambient from the topmost layer, apportioned by area.
    {
        const auto& top = net.grids.back();
        const int cells = top.n * top.n;
        const double g_cell = 1.0 / (pkg.convection_resistance_k_w * cells);
        const double c_cell = pkg.convection_capacitance_j_k / cells;
        for (int idx = 0; idx < cells; ++idx) {
            net.ground_g[top.node_offset + idx] = g_cell;
            net.capacitance[top.node_offset + idx] += c_cell;
        }
    }
    for (const auto& g : net.grids) {
        const double c_cell = g.vol_heat_capacity * g.pitch * g.pitch * g.thickness;
        for (int idx = 0; idx < g.n * g.n; ++idx)
            net.capacitance[g.node_offset + idx] += c_cell;
    }

    // Block-to-cell power injection, weighted by overlap area and normalized
    // so every block's fractions sum to exactly one.
    for (size_t li = 0; li < fp.layers.size(); ++li) {
        const auto& grid = net.grids[die_stack_index[li]];
        const double half_side = fp.side / 2.0;
        for (const Block& b : fp.layers[li].plan.blocks) {
            const double bx0 = b.x - half_side;
            const double bx1 = b.x + b.width - half_side;
            const double by0 = b.y - half_side;
            const double by1 = b.y + b.height - half_side;
            std::vector<std::pair<int, double>> cells;
            double weight_sum = 0.0;
            for (int row = detail::first_overlapping_cell(grid, by0); row < grid.n; ++row) {
                if (detail::cell_lo(grid, row) >= by1)
                    break;
                const double oy = std::min(by1, detail::cell_lo(grid, row + 1)) -
                                  std::max(by0, detail::cell_lo(grid, row));
                if (oy <= 0.0)
                    continue;
                for (int col = detail::first_overlapping_cell(grid, bx0); col < grid.n; ++col) {
                    if (detail::cell_lo(grid, col) >= bx1)
                        break;
                    const double ox = std::min(bx1, detail::cell_lo(grid, col + 1)) -
                                      std::max(bx0, detail::cell_lo(grid, col));
                    if (ox <= 0.0)
                        continue;
                    const double w = ox * oy;
                    if (w <= 0.0)
                        continue;
                    cells.emplace_back(detail::node_index(grid, row, col), w);
                    weight_sum += w;
                }
            }
            if (cells.empty() || weight_sum <= 0.0)
                throw std::invalid_argument("build_network: block " + b.name +
                                            " overlaps no grid cell");
            for (auto& [node, w] : cells)
                w /= weight_sum;
            net.injection.emplace(qualified_name(static_cast<int>(li), b.name), std::move(cells));
        }
    }

    // CSR assembly of G: off-diagonal -g per edge, diagonal = sum of incident
    // conductances plus ground.
    {
        const int n = net.n_nodes;
        std::vector<int> degree(n, 1); // diagonal slot
        for (const auto& e : net.edges) {
            ++degree[e.a];
            ++degree[e.b];
        }
        net.matrix.n = n;
        net.matrix.row_ptr.assign(n + 1, 0);
        for (int i = 0; i < n; ++i)
            net.matrix.row_ptr[i + 1] = net.matrix.row_ptr[i] + degree[i];
        const int nnz = net.matrix.row_ptr[n];
        net.matrix.col.assign(nnz, 0);
        net.matrix.val.assign(nnz, 0.0);
        std::vector<int> cursor(net.matrix.row_ptr.begin(), net.matrix.row_ptr.end() - 1);
        net.base_diag.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            net.base_diag[i] = net.ground_g[i];
            net.matrix.col[cursor[i]] = i; // diagonal first, value patched below
            ++cursor[i];
        }
        for (const auto& e : net.edges) {
            net.matrix.col[cursor[e.a]] = e.b;
            net.matrix.val[cursor[e.a]] = -e.g;
            ++cursor[e.a];
            net.matrix.col[cursor[e.b]] = e.a;
            net.matrix.val[cursor[e.b]] = -e.g;
            ++cursor[e.b];
            net.base_diag[e.a] += e.g;
            net.base_diag[e.b] += e.g;
        }
        // Sort each row by column index for deterministic, cache-friendly rows.
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < n; ++i) {
            row.clear();
            for (int k = net.matrix.row_ptr[i]; k < net.matrix.row_ptr[i + 1]; ++k)
                row.emplace_back(net.matrix.col[k], net.matrix.val[k]);
            std::sort(row.begin(), row.end());
            for (int k = net.matrix.row_ptr[i], j = 0; k < net.matrix.row_ptr[i + 1]; ++k, ++j) {
                net.matrix.col[k] = row[j].first;
                net.matrix.val[k] = row[j].second;
            }
        }
        net.diag_pos.assign(n, -1);
        net.inv_diag.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int k = net.matrix.row_ptr[i]; k < net.matrix.row_ptr[i + 1]; ++k) {
                if (net.matrix.col[k] == i) {
                    net.diag_pos[i] = k;
                    net.matrix.val[k] = net.base_diag[i];
                    break;
                }
            }
            if (net.diag_pos[i] < 0 || !(net.base_diag[i] > 0.0))
                throw std::runtime_error("build_network: node " + std::to_string(i) +
                                         " is disconnected");
            net.inv_diag[i] = 1.0 / net.base_diag[i];
        }
    }
    return net;
}

struct BlockTemp {
    double max_c = 0.0;
    double mean_c = 0.0;
};

/// Solved temperature field with the reductions the explorer reports.
struct ThermalField {
    std::vector<double> temp_c;
    double peak_c = 0.0;
    int peak_node = -1;
    double cmp_peak_c = std::numeric_limits<double>::quiet_NaN();
    double dram_peak_c = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> grid_peak_c;
    std::map<std::string, BlockTemp> block_temp;
};

namespace detail {

inline ThermalField make_field(const ThermalNetwork& net, const std::vector<double>& rise) {
    ThermalField field;
    field.temp_c.resize(net.n_nodes);
    for (int i = 0; i < net.n_nodes; ++i)
        field.temp_c[i] = net.ambient_c + rise[i];

    field.peak_c = -std::numeric_limits<double>::infinity();
    field.grid_peak_c.assign(net.grids.size(), -std::numeric_limits<double>::infinity());
    double cmp_peak = -std::numeric_limits<double>::infinity();
    double dram_peak = -std::numeric_limits<double>::infinity();
    bool has_cmp = false, has_dram = false;
    for (size_t gi = 0; gi < net.grids.size(); ++gi) {
        const auto& g = net.grids[gi];
        double peak = -std::numeric_limits<double>::infinity();
        for (int idx = 0; idx < g.n * g.n; ++idx)
            peak = std::max(peak, field.temp_c[g.node_offset + idx]);
        field.grid_peak_c[gi] = peak;
        if (g.role == MaterialRole::cmp_die) {
            cmp_peak = std::max(cmp_peak, peak);
            has_cmp = true;
        }
        if (g.role == MaterialRole::dram_die) {
            dram_peak = std::max(dram_peak, peak);
            has_dram = true;
        }
    }
    if (has_cmp)
        field.cmp_peak_c = cmp_peak;
    if (has_dram)
        field.dram_peak_c = dram_peak;
    for (int i = 0; i < net.n_nodes; ++i) {
        if (field.temp_c[i] > field.peak_c) {
            field.peak_c = field.temp_c[i];
            field.peak_node = i;
        }
    }
    for (const auto& [name, cells] : net.injection) {
        BlockTemp bt;
        bt.max_c = -std::numeric_limits<double>::infinity();
        bt.mean_c = 0.0;
        for (const auto& [node, frac] : cells) {
            bt.max_c = std::max(bt.max_c, field.temp_c[node]);
            bt.mean_c += frac * field.temp_c[node];
        }
        field.block_temp.emplace(name, bt);
    }
    return field;
}

/// Per-node injected power for one phase. Every phase block must exist in
/// the network and vice versa.
inline std::vector<double> power_vector(const ThermalNetwork& net, const PowerPhase& phase) {
    if (phase.block_power.size() != net.injection.size())
        throw std::invalid_argument("thermal solve: phase covers " +
                                    std::to_string(phase.block_power.size()) +
                                    " blocks, network has " +
                                    std::to_string(net.injection.size()));
    std::vector<double> p(net.n_nodes, 0.0);
    for (const auto& [name, watts] : phase.block_power) {
        const auto it = net.injection.find(name);
        if (it == net.injection.end())
            throw std::invalid_argument("thermal solve: block '" + name +
                                        "' is not part of the network");
        if (watts < 0.0)
            throw std::domain_error("thermal solve: negative power on block '" + name + "'");
        for (const auto& [node, frac] : it->second)
            p[node] += watts * frac;
    }
    return p;
}

inline void solve_or_throw(const CsrMatrix& m, std::span<const double> b,
                           std::vector<double>& x, std::span<const double> inv_diag,
                           double rel_tol) {
    const CgResult res = cg_solve(m, b, x, inv_diag, rel_tol);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "thermal solve: CG stalled after " << res.iterations
            << " iterations, residual " << res.residual_norm
            << " (system may be ill-conditioned)";
        throw std::runtime_error(msg.str());
    }
}

} // namespace detail

constexpr double kSteadyRelTol = 1e-11;

/// Steady-state field for one power phase: solves G * rise = P.
inline ThermalField solve_steady(const ThermalNetwork& net, const PowerPhase& phase) {
    const std::vector<double> p = detail::power_vector(net, phase);
    std::vector<double> rise(net.n_nodes, 0.0);
    detail::solve_or_throw(net.matrix, p, rise, net.inv_diag, kSteadyRelTol);
    return detail::make_field(net, rise);
}

/// Heat leaving through the convection boundary, W. Equals injected power at
/// a converged steady state.
inline double ambient_heat_flow(const ThermalNetwork& net, const ThermalField& field) {
    double flow = 0.0;
    for (int i = 0; i < net.n_nodes; ++i)
        flow += net.ground_g[i] * (field.temp_c[i] - net.ambient_c);
    return flow;
}

struct TraceSolveResult {
    std::vector<ThermalField> phase_fields; ///< aligned with trace.phases
    double peak_c = 0.0;
    double cmp_peak_c = 0.0;
    double dram_peak_c = 0.0;
    int peak_phase = -1;
};

/// Per-phase steady-state analysis of a trace; the summary takes the worst
/// phase. Appropriate when every phase lasts long enough to settle.
inline TraceSolveResult solve_trace(const ThermalNetwork& net, const PowerTrace& trace) {
    if (trace.phases.empty())
        throw std::invalid_argument("solve_trace: trace has no phases");
    TraceSolveResult result;
    result.peak_c = -std::numeric_limits<double>::infinity();
    result.cmp_peak_c = -std::numeric_limits<double>::infinity();
    result.dram_peak_c = -std::numeric_limits<double>::infinity();
    for (size_t pi = 0; pi < trace.phases.size(); ++pi) {
        ThermalField field = solve_steady(net, trace.phases[pi]);
        if (field.peak_c > result.peak_c) {
            result.peak_c = field.peak_c;
            result.peak_phase = static_cast<int>(pi);
        }
        if (!std::isnan(field.cmp_peak_c))
            result.cmp_peak_c = std::max(result.cmp_peak_c, field.cmp_peak_c);
        if (!std::isnan(field.dram_peak_c))
            result.dram_peak_c = std::max(result.dram_peak_c, field.dram_peak_c);
        result.phase_fields.push_back(std::move(field));
    }
    return result;
}

struct TransientSample {
    double time_s = 0.0;
    ThermalField field;
};

/// Backward-Euler transient over a trace with a fixed step. The initial
/// condition is ambient everywhere; past the end of the trace the last
/// phase's power persists, so the series approaches that phase's steady
/// state for large t_end.
inline std::vector<TransientSample> solve_transient(const ThermalNetwork& net,
                                                    const PowerTrace& trace, double dt,
                                                    double t_end) {
    if (!(dt > 0.0))
        throw std::domain_error("solve_transient: dt must be > 0");
    if (trace.phases.empty())
        throw std::invalid_argument("solve_transient: trace has no phases");
    std::vector<std::vector<double>> phase_power;
    phase_power.reserve(trace.phases.size());
    for (const auto& phase : trace.phases)
        phase_power.push_back(detail::power_vector(net, phase));

    CsrMatrix m = net.matrix;
    std::vector<double> inv_diag(net.n_nodes);
    for (int i = 0; i < net.n_nodes; ++i) {
        m.val[net.diag_pos[i]] = net.base_diag[i] + net.capacitance[i] / dt;
        inv_diag[i] = 1.0 / m.val[net.diag_pos[i]];
    }

    auto phase_at = [&](double t) {
        double acc = 0.0;
        for (size_t pi = 0; pi < trace.phases.size(); ++pi) {
            acc += trace.phases[pi].duration;
            if (t < acc)
                return pi;
        }
        return trace.phases.size() - 1;
    };

    std::vector<TransientSample> series;
    std::vector<double> rise(net.n_nodes, 0.0);
    std::vector<double> rhs(net.n_nodes);
    const int steps = static_cast<int>(std::ceil(t_end / dt));
    for (int step = 1; step <= steps; ++step) {
        const double t_mid = (step - 0.5) * dt; // power of the interval being stepped over
        const auto& p = phase_power[phase_at(t_mid)];
        for (int i = 0; i < net.n_nodes; ++i)
            rhs[i] = net.capacitance[i] / dt * rise[i] + p[i];
        detail::solve_or_throw(m, rhs, rise, inv_diag, kSteadyRelTol);
        series.push_back({step * dt, detail::make_field(net, rise)});
    }
    return series;
}

struct TransientPeakResult {
    double peak_c = 0.0;
    double cmp_peak_c = 0.0;
    double dram_peak_c = 0.0;
    ThermalField final_field;
};

/// Peak temperatures over one pass through a trace, integrated from ambient
/// with a per-phase geometric step ramp (fine steps at each phase start
/// where the field moves fastest). Used for mixed serial/parallel traces
/// whose phases are too short to settle.
inline TransientPeakResult transient_trace_peak(const ThermalNetwork& net,
                                                const PowerTrace& trace,
                                                int steps_per_phase = 64,
                                                double ratio = 1.15) {
    if (trace.phases.empty())
        throw std::invalid_argument("transient_trace_peak: trace has no phases");
    if (steps_per_phase < 1 || !(ratio > 1.0))
        throw std::domain_error("transient_trace_peak: bad stepping parameters");

    CsrMatrix m = net.matrix;
    std::vector<double> inv_diag(net.n_nodes);
    std::vector<double> rise(net.n_nodes, 0.0);
    std::vector<double> rhs(net.n_nodes);

    TransientPeakResult result;
    result.peak_c = net.ambient_c;
    result.cmp_peak_c = net.ambient_c;
    result.dram_peak_c = net.ambient_c;

    auto record_peaks = [&] {
        for (const auto& g : net.grids) {
            double grid_peak = -std::numeric_limits<double>::infinity();
            for (int idx = 0; idx < g.n * g.n; ++idx)
                grid_peak = std::max(grid_peak, rise[g.node_offset + idx]);
            grid_peak += net.ambient_c;
            result.peak_c = std::max(result.peak_c, grid_peak);
            if (g.role == MaterialRole::cmp_die)
                result.cmp_peak_c = std::max(result.cmp_peak_c, grid_peak);
            if (g.role == MaterialRole::dram_die)
                result.dram_peak_c = std::max(result.dram_peak_c, grid_peak);
        }
    };

    for (const auto& phase : trace.phases) {
        const std::vector<double> p = detail::power_vector(net, phase);
        // dt_k = duration * (ratio - 1) * ratio^k / (ratio^steps - 1)
        const double scale =
            phase.duration * (ratio - 1.0) / (std::pow(ratio, steps_per_phase) - 1.0);
        double dt = scale;
        for (int step = 0; step < steps_per_phase; ++step, dt *= ratio) {
            for (int i = 0; i < net.n_nodes; ++i) {
                m.val[net.diag_pos[i]] = net.base_diag[i] + net.capacitance[i] / dt;
                inv_diag[i] = 1.0 / m.val[net.diag_pos[i]];
                rhs[i] = net.capacitance[i] / dt * rise[i] + p[i];
            }
            detail::solve_or_throw(m, rhs, rise, inv_diag, kSteadyRelTol);
            record_peaks();
        }
    }
    result.final_field = detail::make_field(net, rise);
    return result;
}

/// Cell-center position of a node, meters from the stack center.
inline std::pair<double, double> node_position(const ThermalNetwork& net, int node) {
    const auto& g = net.grids[net.grid_of(node)];
    const int local = node - g.node_offset;
    const int row = local / g.n;
    const int col = local % g.n;
    return {detail::cell_center(g, col), detail::cell_center(g, row)};
}

} // namespace hotstack
