// dynatda: command-line front end for the invariants, distances and oracles.

#include <CLI11.hpp>
#include <json.hpp>

#include <dynatda/dynatda.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dynatda;

namespace {

struct Options {
    std::string input, input_b;
    std::string grid, scale;
    double unit_ratio = 2.0;
    std::string invariant = "betti0";
    std::size_t k = 0;
    std::string out;
    std::size_t threads = 0;
    bool cache = false;
    std::string ambient = "euclidean";
    std::vector<double> slice_scales;
    std::size_t time_index = 0;
    std::size_t max_cells = std::size_t{1} << 24;
    bool generic_rank0 = false;
    // oracle
    std::string oracle = "ddyn";
    double lambda = 1.0;
    double p = 1.0;
    // example
    std::string family = "figure1-x";
    double r = 1.0;
    double distance = 1.0;
    std::string metric;
};

// accepts plain reals and multiples of pi ("pi", "-2pi", "0.5pi")
double parse_number(std::string s, const char* what) {
    s = detail::trim(s);
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s.resize(s.size() - 2);
        if (s.empty() || s == "+") s = "1";
        if (s == "-") s = "-1";
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v * factor;
    } catch (const std::exception&) {
        throw validation_error(std::string("bad number for ") + what + ": '" + s + "'");
    }
}

struct Range {
    double lo = 0.0, hi = 0.0;
    std::size_t steps = 0;
};

Range parse_range(const std::string& text, const char* what) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw validation_error(std::string(what) + " must look like start:end:steps");
    Range r{parse_number(parts[0], what), parse_number(parts[1], what), 0};
    const double steps = parse_number(parts[2], what);
    if (steps != std::floor(steps) || steps < 0) throw validation_error(std::string(what) + ": steps must be a whole number");
    r.steps = std::size_t(steps);
    if (r.steps == 0 || !(r.hi > r.lo)) throw validation_error(std::string("empty ") + what + " range '" + text + "'");
    return r;
}

TimeGrid grid_of(const Range& r) { return {r.lo, (r.hi - r.lo) / double(r.steps), r.steps + 1}; }

ScaleAxis scale_of(const Range& r) { return {r.lo, (r.hi - r.lo) / double(r.steps), r.steps + 1}; }

std::size_t grid_index(const TimeGrid& g, double t) {
    const double q = (t - g.t0) / g.step;
    const double rq = std::round(q);
    if (std::abs(q - rq) > 1e-6 || rq < 0 || rq > double(g.count - 1)) {
        std::ostringstream os;
        os << "time " << t << " is not a sample of the input grid";
        throw config_error(os.str());
    }
    return std::size_t(rq);
}

// crop to [t0, t1] and keep every m-th sample so that `steps` intervals remain
SampledDMS apply_grid(const SampledDMS& dms, const std::string& spec) {
    if (spec.empty()) return dms;
    const Range r = parse_range(spec, "grid");
    const std::size_t i0 = grid_index(dms.grid(), r.lo), i1 = grid_index(dms.grid(), r.hi);
    if ((i1 - i0) % r.steps != 0) {
        std::ostringstream os;
        os << "grid " << spec << " does not divide the " << (i1 - i0) << " input intervals";
        throw config_error(os.str());
    }
    return discretize(crop(dms, i0, i1), (i1 - i0) / r.steps);
}

SampledDMS load_input(const std::string& path, const Options& o) {
    if (path.empty()) throw config_error("missing --input");
    return apply_grid(load_dms(path, parse_ambient_metric(o.ambient)), o.grid);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw validation_error("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw validation_error("cannot write " + p.string());
    out << text;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

fs::path cache_dir() {
    if (const char* env = std::getenv("DYNATDA_CACHE_DIR"); env && *env) return env;
    return ".dynatda-cache";
}

// Primary JSON text, computed or served from the cache. Everything else is
// derived from this text, so hits and misses produce identical files.
template <class Compute>
std::string cached(const Options& o, const std::string& kind, const std::string& config, Compute&& compute) {
    if (!o.cache) return compute();
    std::uint64_t h = fnv1a(kind + '\n' + config);
    h = fnv1a(read_file(o.input), h);
    if (!o.input_b.empty()) h = fnv1a(read_file(o.input_b), h);
    std::ostringstream name;
    name << kind << '-' << std::hex << std::setw(16) << std::setfill('0') << h << ".json";
    const fs::path dir = cache_dir(), path = dir / name.str();
    if (fs::exists(path)) {
        std::cerr << "cache hit " << path.string() << '\n';
        return read_file(path);
    }
    std::string text = compute();
    fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp";
    write_file(tmp, text);
    fs::rename(tmp, path);
    return text;
}

std::string config_string(const Options& o) {
    std::ostringstream os;
    os.precision(17);
    os << "grid=" << o.grid << ";scale=" << o.scale << ";ratio=" << o.unit_ratio << ";inv=" << o.invariant
       << ";k=" << o.k << ";ambient=" << o.ambient << ";time=" << o.time_index << ";generic=" << o.generic_rank0
       << ";oracle=" << o.oracle << ";lambda=" << o.lambda << ";p=" << o.p;
    return os.str();
}

void emit(const Options& o, const std::string& filename, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / filename, text);
}

std::string grid_text(const GridFunction& g) { return to_json(g).dump() + "\n"; }

void emit_slice(const Options& o, const GridFunction& g, const std::string& stem, std::size_t row, std::size_t col,
                const std::vector<std::size_t>& fixed, const std::string& title) {
    if (o.out.empty()) return;
    std::ostringstream csv, svg;
    write_slice_csv(csv, g, row, col, fixed);
    write_heatmap_svg(svg, g, row, col, fixed, HeatmapStyle{6, title});
    write_file(fs::path(o.out) / (stem + ".csv"), csv.str());
    write_file(fs::path(o.out) / (stem + ".svg"), svg.str());
}

std::vector<std::size_t> slice_indices(const Options& o, const GridAxis& delta) {
    std::vector<std::size_t> out;
    if (o.slice_scales.empty()) return {0, delta.count - 1};
    for (double v : o.slice_scales) {
        const auto m = std::ptrdiff_t(std::llround((v - delta.origin) / delta.step));
        out.push_back(std::size_t(std::clamp<std::ptrdiff_t>(m, 0, std::ptrdiff_t(delta.count) - 1)));
    }
    return out;
}

ScaleAxis scale_for(const Options& o, const SampledDMS& dms, bool all_pairs) {
    if (!o.scale.empty()) return scale_of(parse_range(o.scale, "scale"));
    GridSpec spec;
    spec.unit_ratio = o.unit_ratio;
    return detail::resolve_scale(dms, dms, spec, all_pairs);
}

json matrix_json(const DistanceMatrix& d) {
    json rows = json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < d.size(); ++j) row.push_back(d(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_invariant(const Options& o) {
    const SampledDMS dms = load_input(o.input, o);
    const std::string& inv = o.invariant;

    if (inv == "slhc") {
        if (o.time_index >= dms.count()) throw config_error("--time-index outside the sampled range");
        std::string text = cached(o, "slhc", config_string(o), [&] {
            const SlhcResult s = slhc(dms.slice(o.time_index));
            json merges = json::array();
            for (const auto& m : s.merges) merges.push_back({{"height", m.height}, {"left", m.left}, {"right", m.right}});
            json j = {{"points", dms.points()},
                      {"time", dms.grid().time(o.time_index)},
                      {"ultrametric", matrix_json(s.ultrametric)},
                      {"merges", merges},
                      {"diagram", to_json(s.diagram)}};
            return j.dump() + "\n";
        });
        emit(o, "slhc.json", text);
        return 0;
    }

    if (inv != "betti0" && inv != "crocker" && inv != "rank")
        throw config_error("unknown invariant '" + inv + "' (betti0, rank, crocker, slhc)");

    const ScaleAxis scale = scale_for(o, dms, inv != "betti0" || o.k > 0);
    std::string text = cached(o, inv, config_string(o), [&] {
        if (inv == "betti0") {
            Betti0Options bo;
            bo.unit_ratio = o.unit_ratio;
            bo.threads = o.threads;
            GridFunction g = betti0_grid(dms, scale, bo);
            if (!is_order_reversing(g)) throw invariant_violation("betti0 grid is not order-reversing");
            return grid_text(g);
        }
        if (inv == "crocker") return grid_text(crocker(dms, o.k, scale, o.threads));
        RankGridSpec rs{scale, o.unit_ratio, o.threads, {}};
        return grid_text(RankInvariantGrid(dms, o.k, rs).materialize(o.max_cells, o.threads));
    });

    emit(o, inv + ".json", text);
    const GridFunction g = grid_from_json(json::parse(text));
    if (inv == "betti0") {
        for (std::size_t m : slice_indices(o, g.axes()[2])) {
            std::ostringstream title;
            title << "betti0 at delta = " << g.axes()[2].coordinate(std::ptrdiff_t(m));
            emit_slice(o, g, "betti0_delta" + std::to_string(m), 0, 1, {0, 0, m}, title.str());
        }
    } else if (inv == "crocker") {
        emit_slice(o, g, "crocker", 0, 1, {0, 0}, "crocker k = " + std::to_string(o.k));
    } else {
        const std::size_t t = std::min(o.time_index, g.axes()[0].count - 1);
        emit_slice(o, g, "rank_t" + std::to_string(t), 2, 5, {t, t, 0, t, t, 0},
                   "rank k = " + std::to_string(o.k) + " at sample " + std::to_string(t));
    }
    return 0;
}

int run_compare(const Options& o) {
    const SampledDMS a = load_input(o.input, o);
    if (o.input_b.empty()) throw config_error("missing --input-b");
    const SampledDMS b = load_input(o.input_b, o);
    std::string text = cached(o, "compare", config_string(o), [&] {
        GridSpec spec;
        if (!o.scale.empty()) spec.scale = scale_of(parse_range(o.scale, "scale"));
        spec.unit_ratio = o.unit_ratio;
        spec.threads = o.threads;
        spec.generic_rank0 = o.generic_rank0;
        ComparisonReport rep;
        if (o.invariant == "betti0")
            rep = compare_betti0(a, b, spec);
        else if (o.invariant == "rank")
            rep = compare_rank(a, b, o.k, spec);
        else
            throw config_error("compare supports --invariant betti0 or rank");
        return rep.to_json().dump(2) + "\n";
    });
    if (!o.out.empty()) emit(o, "report.json", text);
    std::cout << text;
    return 0;
}

int run_oracle(const Options& o) {
    const SampledDMS a = load_input(o.input, o);
    if (o.input_b.empty()) throw config_error("missing --input-b");
    const SampledDMS b = load_input(o.input_b, o);
    std::string text = cached(o, "oracle", config_string(o), [&] {
        json j = {{"oracle", o.oracle}};
        OracleResult res;
        bool with_corr = true;
        if (o.oracle == "ddyn") {
            res = ddyn_bruteforce(a, b);
            j["grid_multiple"] = res.grid_multiple;
        } else if (o.oracle == "dyn-gh") {
            res = dyn_gh(a, b);
        } else if (o.oracle == "multiplicative") {
            res = ddyn_multiplicative(a, b, o.lambda);
            j["lambda"] = o.lambda;
        } else if (o.oracle == "gh") {
            if (o.time_index >= a.count() || o.time_index >= b.count())
                throw config_error("--time-index outside the sampled range");
            res = gh_bruteforce(a.slice(o.time_index), b.slice(o.time_index));
            j["time"] = a.grid().time(o.time_index);
        } else if (o.oracle == "weak-lp") {
            res.value = weak_lp_gh(a, b, o.p);
            j["p"] = o.p;
            with_corr = false;
        } else {
            throw config_error("unknown oracle '" + o.oracle + "' (ddyn, dyn-gh, multiplicative, gh, weak-lp)");
        }
        j["value"] = res.value;
        if (with_corr) {
            json pairs = json::array();
            for (auto [x, y] : res.best.pairs) pairs.push_back({a.points()[x], b.points()[y]});
            j["correspondence"] = pairs;
        }
        return j.dump(2) + "\n";
    });
    if (!o.out.empty()) emit(o, "oracle.json", text);
    std::cout << text;
    return 0;
}

int run_example(const Options& o) {
    const TimeGrid g = grid_of(parse_range(o.grid.empty() ? "-2pi:2pi:256" : o.grid, "grid"));
    std::optional<SampledDMS> dms;
    if (o.family == "figure1-x") {
        dms = make_figure1_x(o.r, g);
    } else if (o.family == "figure1-y") {
        dms = make_figure1_y(o.r, g);
    } else if (o.family == "two-point") {
        if (!(o.distance > 0.0)) throw validation_error("--distance must be positive");
        DistanceMatrix d(2, o.distance);
        dms = make_constant(d, g, {"a", "b"});
    } else if (o.family == "constant") {
        if (o.metric.empty()) throw config_error("constant family needs --metric (JSON rows)");
        const json rows = json::parse(read_file(o.metric), nullptr, false);
        if (rows.is_discarded() || !rows.is_array()) throw validation_error("--metric is not a JSON array of rows");
        dms = make_constant(DistanceMatrix::from_rows(rows.get<std::vector<std::vector<double>>>()), g);
    } else {
        throw config_error("unknown family '" + o.family + "' (figure1-x, figure1-y, two-point, constant)");
    }
    std::ostringstream os;
    write_tensor_json(os, *dms);
    if (o.out.empty())
        std::cout << os.str();
    else
        write_file(o.out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynatda: invariants and distances for dynamic metric spaces"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--input", o.input, "DMS file (.csv trajectories or tensor JSON)");
        sc->add_option("--grid", o.grid, "time grid t0:t1:steps (crop then subsample)");
        sc->add_option("--ambient", o.ambient, "ambient metric for trajectory CSV")
            ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
        sc->add_option("--out", o.out, "output directory (or file for example)");
        sc->add_option("--threads", o.threads, "worker threads, 0 = all cores");
        sc->add_flag("--cache", o.cache, "reuse results from DYNATDA_CACHE_DIR");
        sc->add_option("--time-index", o.time_index, "sample used by single-time outputs");
    };
    auto scaled = [&](CLI::App* sc) {
        sc->add_option("--scale", o.scale, "scale axis d0:d1:steps");
        sc->add_option("--unit-ratio", o.unit_ratio, "scale step / time step")->check(CLI::PositiveNumber);
        sc->add_option("--invariant", o.invariant, "betti0 | rank | crocker | slhc");
        sc->add_option("--k", o.k, "homological degree");
    };

    auto* inv = app.add_subcommand("invariant", "compute an invariant grid and its slices");
    common(inv);
    scaled(inv);
    inv->add_option("--slice-scale", o.slice_scales, "scales for betti0 heatmaps");
    inv->add_option("--max-cells", o.max_cells, "size cap for the rank grid");

    auto* cmp = app.add_subcommand("compare", "interleaving distance between two DMSs");
    common(cmp);
    scaled(cmp);
    cmp->add_option("--input-b", o.input_b, "second DMS");
    cmp->add_flag("--generic-rank0", o.generic_rank0, "rank-0 through the full 6-D grid");

    auto* ora = app.add_subcommand("oracle", "brute-force reference distances");
    common(ora);
    ora->add_option("--input-b", o.input_b, "second DMS");
    ora->add_option("--oracle", o.oracle, "ddyn | dyn-gh | multiplicative | gh | weak-lp");
    ora->add_option("--lambda", o.lambda, "multiplicative parameter")->check(CLI::PositiveNumber);
    ora->add_option("--p", o.p, "exponent for weak-lp")->check(CLI::PositiveNumber);

    auto* ex = app.add_subcommand("example", "write a synthetic DMS as tensor JSON");
    ex->add_option("--family", o.family, "figure1-x | figure1-y | two-point | constant");
    ex->add_option("--r", o.r, "amplitude for the figure families");
    ex->add_option("--distance", o.distance, "distance for two-point");
    ex->add_option("--metric", o.metric, "JSON rows for constant");
    ex->add_option("--grid", o.grid, "time grid t0:t1:steps, pi multiples allowed");
    ex->add_option("--out", o.out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*inv) return run_invariant(o);
        if (*cmp) return run_compare(o);
        if (*ora) return run_oracle(o);
        return run_example(o);
    } catch (const size_cap_error& e) {
        std::cerr << "size cap: " << e.what() << '\n';
        return 3;
    } catch (const invariant_violation& e) {
        std::cerr << "self-check failed: " << e.what() << '\n';
        return 4;
    } catch (const validation_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const config_error& e) {
        std::cerr << "configuration: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
