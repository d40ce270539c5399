#include "uavls/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "uavls/errors.hpp"
#include "uavls/mcsim.hpp"
#include "uavls/outage.hpp"

namespace uavls::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct RowGeometry {
    Position tx;
    Position rx;
    Position interferer;
};

// Applies the sweep axis and any interferer lock to the base geometry.
RowGeometry geometry_at(const ScenarioConfig& cfg, double value) {
    RowGeometry g{cfg.tx, cfg.rx, cfg.interferer};
    if (cfg.sweep) {
        switch (cfg.sweep->axis) {
            case SweepAxis::interferer_dh:
                g.interferer = {value, 0.0, cfg.interferer.z};
                break;
            case SweepAxis::main_dh:
                g.tx = {value, 0.0, cfg.tx.z};
                break;
            case SweepAxis::rx_height:
                g.rx.z = value;
                break;
            case SweepAxis::tx_height:
                g.tx.z = value;
                break;
        }
    }
    if (cfg.interferer_lock == InterfererLock::fixed_link_distance) {
        g.interferer = {g.rx.x + cfg.interferer_distance, g.rx.y, g.rx.z};
    }
    return g;
}

outage::LinkPairConfig pair_config(const ScenarioConfig& cfg, const RowGeometry& g) {
    return {LinkGeometry(g.tx, g.rx), LinkGeometry(g.interferer, g.rx), cfg.env, cfg.radio};
}

network::NetworkParams network_at(const ScenarioConfig& cfg, const RowGeometry& g) {
    network::NetworkParams net = *cfg.net;
    net.rx_height = g.rx.z;
    if (cfg.interferer_height_tracks_rx) net.interferer_height = g.rx.z;
    return net;
}

std::vector<double> sweep_values(const SweepSpec& sw) {
    std::vector<double> v;
    v.reserve(sw.steps);
    if (sw.steps == 1) {
        v.push_back(sw.min);
        return v;
    }
    for (int i = 0; i < sw.steps; ++i) {
        v.push_back(sw.min + (sw.max - sw.min) * i / (sw.steps - 1));
    }
    return v;
}

specfun::QuadratureSpec quad_spec(const RunOptions& opts) {
    specfun::QuadratureSpec q;
    if (opts.tolerance) {
        q.relative_tolerance = *opts.tolerance;
        q.absolute_tolerance = *opts.tolerance * 1e-3;
    }
    return q;
}

struct Row {
    std::vector<double> values;
    std::string status = "ok";
    std::string diag;
};

void emit(std::ostream& out, double sweep_value, const Row& row) {
    out << fmt(sweep_value);
    for (double v : row.values) out << ',' << fmt(v);
    out << ',' << row.status << '\n';
}

// Evaluates one row per sweep value, concurrently for pure-analytic fills;
// rows are buffered and emitted in sweep order either way.
bool run_curve(std::ostream& out, std::ostream& diag, const std::vector<double>& values,
               std::size_t n_columns, bool parallel,
               const std::function<void(double, Row&)>& fill) {
    std::vector<Row> rows(values.size());
    auto compute = [&](std::size_t i) {
        Row& row = rows[i];
        row.values.assign(n_columns, std::nan(""));
        try {
            fill(values[i], row);
        } catch (const quadrature_error& e) {
            row.status = "error:quadrature";
            row.diag = e.what();
        } catch (const solver_error& e) {
            row.status = "error:solver";
            row.diag = e.what();
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (parallel && hw > 1 && values.size() > 1) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < values.size();
                 i = next.fetch_add(1)) {
                compute(i);
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(hw, values.size());
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) compute(i);
    }

    bool any_failure = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!rows[i].diag.empty()) {
            diag << "row failure: " << rows[i].diag << '\n';
            any_failure = true;
        }
        emit(out, values[i], rows[i]);
    }
    return any_failure;
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Objective for optimal-height mode, chosen by what the config describes.
std::function<double(double)> height_objective(const ScenarioConfig& cfg,
                                               const specfun::QuadratureSpec& quad) {
    if (cfg.net) {
        if (cfg.association == Association::nearest) {
            return [cfg, quad](double h) {
                RowGeometry g = geometry_at(cfg, h);
                return network_outage(network_at(cfg, g), cfg.env, cfg.radio, quad);
            };
        }
        return [cfg, quad](double h) {
            RowGeometry g = geometry_at(cfg, h);
            const LinkGeometry main(g.tx, g.rx);
            return network::outage_multi_breakdown(main, main.horizontal_distance(),
                                                   network_at(cfg, g), cfg.env, cfg.radio,
                                                   quad)
                .total;
        };
    }
    return [cfg, quad](double h) {
        const RowGeometry g = geometry_at(cfg, h);
        return outage::outage_total_sir(pair_config(cfg, g)).total;
    };
}

}  // namespace

OptimalHeightResult optimal_height(const ScenarioConfig& cfg, const RunOptions& opts) {
    if (!cfg.sweep) throw config_error("optimal-height needs a [sweep] grid");
    const auto quad = quad_spec(opts);
    const auto f = height_objective(cfg, quad);
    const std::vector<double> grid = sweep_values(*cfg.sweep);

    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);

    std::size_t best = 0;
    int local_minima = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] < vals[best]) best = i;
        const bool left_ok = i == 0 || vals[i] < vals[i - 1];
        const bool right_ok = i + 1 == vals.size() || vals[i] <= vals[i + 1];
        if (i > 0 && i + 1 < vals.size() && left_ok && right_ok) ++local_minima;
    }

    const double lo = best > 0 ? grid[best - 1] : grid[best];
    const double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
    double height = grid[best];
    if (hi > lo) height = golden_minimize(f, lo, hi, 0.5);
    double outage = f(height);
    if (vals[best] < outage) {  // refinement never worsens the grid answer
        height = grid[best];
        outage = vals[best];
    }
    return {height, outage, local_minima > 1};
}

int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& diag,
                 const RunOptions& opts) {
    const auto quad = quad_spec(opts);
    for (const auto& d : cfg.applied_defaults) diag << "default: " << d << '\n';

    const std::uint64_t seed = opts.seed.value_or(cfg.seed);
    const std::uint64_t trials = opts.trials.value_or(cfg.trials);

    bool any_failure = false;
    switch (cfg.mode) {
        case Mode::general:
        case Mode::sir:
        case Mode::simulate: {
            const bool simulate = cfg.mode == Mode::simulate;
            const bool use_sir =
                cfg.mode == Mode::sir || (simulate && cfg.sim_model == SimModel::sir);
            out << axis_name(cfg.sweep->axis)
                << ",total,p_ll,p_ln,p_nl,p_nn,w_ll,w_ln,w_nl,w_nn";
            if (simulate) out << ",mc_estimate,mc_std_error";
            out << ",status\n";
            const auto values = sweep_values(*cfg.sweep);
            std::size_t row_index = 0;
            // The simulator threads its own trials, so simulate rows run
            // sequentially; pure-analytic rows fan out across cores.
            any_failure = run_curve(
                out, diag, values, simulate ? 11 : 9, !simulate,
                [&](double v, Row& r) {
                    const auto pc = pair_config(cfg, geometry_at(cfg, v));
                    const outage::OutageBreakdown b =
                        use_sir ? outage::outage_total_sir(pc)
                                : outage::outage_total_general(pc, quad);
                    r.values = {b.total, b.p_ll, b.p_ln, b.p_nl, b.p_nn,
                                b.w_ll,  b.w_ln, b.w_nl, b.w_nn};
                    if (simulate) {
                        mcsim::SimSpec spec;
                        spec.trials = trials;
                        spec.seed = seed + row_index++;
                        spec.mode = use_sir ? mcsim::SinrMode::sir : mcsim::SinrMode::sinr;
                        const auto mc = mcsim::simulate_pair_outage(pc, spec);
                        r.values.push_back(mc.estimate);
                        r.values.push_back(mc.std_error);
                    }
                });
            break;
        }
        case Mode::network: {
            const auto values = sweep_values(*cfg.sweep);
            if (cfg.association == Association::nearest) {
                out << axis_name(cfg.sweep->axis) << ",p_net,status\n";
                any_failure = run_curve(out, diag, values, 1, true, [&](double v, Row& r) {
                    const RowGeometry g = geometry_at(cfg, v);
                    r.values = {network_outage(network_at(cfg, g), cfg.env, cfg.radio,
                                               quad)};
                });
            } else {
                out << axis_name(cfg.sweep->axis)
                    << ",p_multi,p_multi_los,p_multi_nlos,p_los_main,p_nearest,status\n";
                any_failure = run_curve(out, diag, values, 5, true, [&](double v, Row& r) {
                    const RowGeometry g = geometry_at(cfg, v);
                    const LinkGeometry main(g.tx, g.rx);
                    const auto net = network_at(cfg, g);
                    const auto mo = network::outage_multi_breakdown(
                        main, main.horizontal_distance(), net, cfg.env, cfg.radio, quad);
                    const double nearest = network::outage_nearest_geometry(
                        main, net, cfg.env, cfg.radio, quad);
                    r.values = {mo.total, mo.los_branch, mo.nlos_branch, mo.p_los_main,
                                nearest};
                });
            }
            break;
        }
        case Mode::nearest: {
            out << axis_name(cfg.sweep->axis) << ",p_nearest,status\n";
            any_failure = run_curve(out, diag, sweep_values(*cfg.sweep), 1, true,
                                    [&](double v, Row& r) {
                                        const RowGeometry g = geometry_at(cfg, v);
                                        r.values = {network::outage_nearest_geometry(
                                            LinkGeometry(g.tx, g.rx), network_at(cfg, g),
                                            cfg.env, cfg.radio, quad)};
                                    });
            break;
        }
        case Mode::crossover: {
            out << "gamma_t,v_prime,interferer_dh,k_m,k_i,v_prime_fixed_k,status\n";
            any_failure = run_curve(
                out, diag, {cfg.radio.gamma_t}, 5, false, [&](double, Row& r) {
                    const auto pc = pair_config(cfg, geometry_at(cfg, 0.0));
                    const auto swept = outage::crossover_ratio_swept(pc);
                    const auto main = channel::evaluate_link(pc.main, cfg.env, cfg.radio.p_m);
                    const auto intf =
                        channel::evaluate_link(pc.interferer, cfg.env, cfg.radio.p_i);
                    const double fixed =
                        outage::crossover_ratio(main.k, intf.k, cfg.radio.gamma_t);
                    r.values = {swept.ratio, swept.interferer_dh, main.k, swept.k_i, fixed};
                });
            break;
        }
        case Mode::optimal_height: {
            out << "height_m,outage,multimodal,status\n";
            Row row;
            row.values.assign(2, std::nan(""));
            double height = std::nan("");
            try {
                const auto res = optimal_height(cfg, opts);
                height = res.height;
                row.values = {res.outage, res.multimodal ? 1.0 : 0.0};
                if (res.multimodal) {
                    diag << "warning: outage grid is multi-modal; returning the refined "
                            "global grid minimum\n";
                }
            } catch (const quadrature_error& e) {
                row.status = "error:quadrature";
                diag << "row failure: " << e.what() << '\n';
                any_failure = true;
            } catch (const solver_error& e) {
                row.status = "error:solver";
                diag << "row failure: " << e.what() << '\n';
                any_failure = true;
            }
            emit(out, height, row);
            break;
        }
    }
    return any_failure ? 3 : 0;
}

}  // namespace uavls::cli
