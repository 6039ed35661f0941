#include <gtest/gtest.h>

#include <dynatda/dynatda.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace dynatda;

namespace {

const std::string cli = DYNATDA_CLI_PATH;

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("dynatda_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const fs::path& stdout_file = "/dev/null") {
    const std::string cmd = cli + " " + args + " > '" + stdout_file.string() + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json json_file(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST(Cli, ExampleRoundTripsThroughLoader) {
    auto dir = scratch("example");
    ASSERT_EQ(run("example --family figure1-x --r 1 --grid=-2pi:2pi:64 --out " + (dir / "x.json").string()), 0);
    std::ifstream in(dir / "x.json");
    SampledDMS loaded = load_tensor_json(in);
    TimeGrid g{-2 * std::numbers::pi, std::numbers::pi / 16, 65};
    SampledDMS direct = make_figure1_x(1.0, g);
    EXPECT_EQ(loaded.points(), direct.points());
    EXPECT_EQ(loaded.count(), 65u);
    for (std::size_t k = 0; k < 65; ++k) EXPECT_NEAR(loaded(k, 0, 1), direct(k, 0, 1), 1e-12);

    std::ostringstream again;
    write_tensor_json(again, loaded);
    EXPECT_EQ(again.str(), slurp(dir / "x.json"));
}

TEST(Cli, FigureComparisonWithinBounds) {
    auto dir = scratch("figure");
    ASSERT_EQ(run("example --family figure1-x --r 1 --grid=-2pi:2pi:128 --out " + (dir / "x.json").string()), 0);
    ASSERT_EQ(run("example --family figure1-y --r 1 --grid=-2pi:2pi:128 --out " + (dir / "y.json").string()), 0);
    ASSERT_EQ(run("compare --input " + (dir / "x.json").string() + " --input-b " + (dir / "y.json").string() +
                      " --out " + dir.string(),
                  dir / "stdout.json"),
              0);
    auto rep = json_file(dir / "report.json");
    EXPECT_EQ(rep, json_file(dir / "stdout.json"));
    const double d = rep["d_I_physical"], step = rep["step"];
    EXPECT_GE(d, 1.0 - step);
    EXPECT_LE(d, 2.0);

    ASSERT_EQ(run("compare --input " + (dir / "x.json").string() + " --input-b " + (dir / "x.json").string(),
                  dir / "same.json"),
              0);
    EXPECT_EQ(json_file(dir / "same.json")["d_I_grid_units"], 0);
}

TEST(Cli, ConstantPairReports) {
    auto dir = scratch("constant");
    const auto a = (dir / "a.json").string(), b = (dir / "b.json").string();
    ASSERT_EQ(run("example --family two-point --distance 3 --grid 0:2.5:20 --out " + a), 0);
    ASSERT_EQ(run("example --family two-point --distance 1 --grid 0:2.5:20 --out " + b), 0);

    ASSERT_EQ(run("compare --input " + a + " --input-b " + b, dir / "b0.json"), 0);
    EXPECT_DOUBLE_EQ(double(json_file(dir / "b0.json")["d_I_physical"]), 2.0);

    ASSERT_EQ(run("compare --invariant rank --k 0 --input " + a + " --input-b " + b, dir / "r0.json"), 0);
    EXPECT_DOUBLE_EQ(double(json_file(dir / "r0.json")["d_I_physical"]), 1.5);

    ASSERT_EQ(run("oracle --input " + a + " --input-b " + b, dir / "o.json"), 0);
    auto o = json_file(dir / "o.json");
    EXPECT_DOUBLE_EQ(double(o["value"]), 1.0);
    EXPECT_EQ(o["correspondence"].size(), 2u);

    ASSERT_EQ(run("oracle --oracle gh --input " + a + " --input-b " + b, dir / "gh.json"), 0);
    EXPECT_DOUBLE_EQ(double(json_file(dir / "gh.json")["value"]), 1.0);
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("exit");
    const auto a = (dir / "a.json").string();
    ASSERT_EQ(run("example --family two-point --distance 2 --grid 0:1:4 --out " + a), 0);
    EXPECT_EQ(run("invariant --input " + a + " --scale 0:1:0"), 2);
    EXPECT_EQ(run("invariant --input " + a + " --scale 1:0:4"), 2);
    EXPECT_EQ(run("invariant --input " + a + " --scale 0:2:4 --unit-ratio 3"), 2);
    EXPECT_EQ(run("invariant --input " + a + " --invariant nonsense"), 2);
    EXPECT_EQ(run("invariant --input " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run("invariant --input " + a + " --grid 0:1:3"), 2);
    EXPECT_EQ(run("invariant --bogus-flag"), 2);
    EXPECT_EQ(run("compare --input " + a), 2);

    std::ofstream(dir / "bad.json") << R"({"points":["a","b"],"t0":0,"step":1,"slices":[[[0,-1],[-1,0]]]})";
    EXPECT_EQ(run("invariant --input " + (dir / "bad.json").string()), 2);

    // 12 points exceed the brute-force cap
    ASSERT_EQ(run("example --family figure1-x --grid 0:1:2 --out " + (dir / "x.json").string()), 0);
    std::ofstream metric(dir / "m.json");
    metric << "[";
    for (int i = 0; i < 12; ++i) {
        metric << (i ? "," : "") << "[";
        for (int j = 0; j < 12; ++j) metric << (j ? "," : "") << (i == j ? 0 : 1 + (i + j) % 2);
        metric << "]";
    }
    metric << "]";
    metric.close();
    const auto big = (dir / "big.json").string();
    ASSERT_EQ(run("example --family constant --metric " + (dir / "m.json").string() + " --grid 0:1:2 --out " + big), 0);
    EXPECT_EQ(run("oracle --input " + big + " --input-b " + big), 3);
    EXPECT_EQ(run("invariant --invariant rank --max-cells 10 --input " + a), 3);
}

TEST(Cli, GridFlagCropsAndSubsamples) {
    auto dir = scratch("grid");
    const auto a = (dir / "a.json").string();
    ASSERT_EQ(run("example --family figure1-y --grid 0:8:16 --out " + a), 0);
    ASSERT_EQ(run("invariant --input " + a + " --grid 2:6:4 --out " + (dir / "o").string()), 0);
    GridFunction g = grid_from_json(json_file(dir / "o" / "betti0.json"));
    EXPECT_EQ(g.axes()[0].count, 5u);
    EXPECT_DOUBLE_EQ(g.axes()[0].origin, 2.0);
    EXPECT_DOUBLE_EQ(g.axes()[0].step, 1.0);
}

TEST(Cli, InvariantOutputsRoundTripAndCacheIsByteIdentical) {
    auto dir = scratch("cache");
    const auto x = (dir / "x.json").string();
    ASSERT_EQ(run("example --family figure1-x --r 1 --grid=-2pi:2pi:64 --out " + x), 0);
    ::setenv("DYNATDA_CACHE_DIR", (dir / "cache").c_str(), 1);

    for (std::string inv : {"betti0", "crocker", "rank"}) {
        std::string extra = inv == "rank" ? " --grid=-pi:pi:8" : "";
        const auto first = dir / (inv + "1"), second = dir / (inv + "2"), plain = dir / (inv + "0");
        ASSERT_EQ(run("invariant --invariant " + inv + extra + " --input " + x + " --out " + plain.string()), 0);
        ASSERT_EQ(run("invariant --cache --invariant " + inv + extra + " --input " + x + " --out " + first.string()), 0);
        ASSERT_EQ(run("invariant --cache --invariant " + inv + extra + " --input " + x + " --out " + second.string()), 0);
        std::size_t files = 0;
        for (const auto& e : fs::directory_iterator(first)) {
            const auto name = e.path().filename();
            EXPECT_EQ(slurp(e.path()), slurp(second / name)) << inv << " " << name;
            EXPECT_EQ(slurp(e.path()), slurp(plain / name)) << inv << " " << name;
            ++files;
        }
        EXPECT_GE(files, 3u) << inv;

        // grid JSON round-trips through the loader bit-exactly
        const std::string text = slurp(first / (inv + ".json"));
        GridFunction g = grid_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(to_json(g).dump() + "\n", text);
    }
    std::size_t cached = 0;
    for (const auto& e : fs::directory_iterator(dir / "cache")) {
        EXPECT_NE(e.path().filename().string().find('-'), std::string::npos);
        ++cached;
    }
    EXPECT_EQ(cached, 3u);

    ASSERT_EQ(run("invariant --invariant slhc --time-index 16 --input " + x + " --out " + (dir / "s").string()), 0);
    auto s = json_file(dir / "s" / "slhc.json");
    EXPECT_EQ(s["merges"].size(), 2u);
    EXPECT_EQ(s["diagram"].size(), 3u);
}

TEST(Cli, BettiSliceCsvMatchesLibrary) {
    auto dir = scratch("slice");
    const auto x = (dir / "x.json").string();
    ASSERT_EQ(run("example --family figure1-x --r 1 --grid=-2pi:2pi:64 --out " + x), 0);
    ASSERT_EQ(run("invariant --input " + x + " --threads 2 --slice-scale 0 --out " + (dir / "o").string()), 0);
    std::ifstream in(x);
    SampledDMS dms = load_tensor_json(in);
    ScaleAxis s = default_scale_axis(dms.grid(), 2.0, detail::max_slice_merge_height(dms));
    GridFunction g = betti0_grid(dms, s, {});
    std::ostringstream csv;
    write_slice_csv(csv, g, 0, 1, {0, 0, 0});
    EXPECT_EQ(csv.str(), slurp(dir / "o" / "betti0_delta0.csv"));
    EXPECT_NE(slurp(dir / "o" / "betti0_delta0.svg").find("<svg"), std::string::npos);
}
