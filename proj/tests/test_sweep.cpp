#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "csr/config_io.hpp"
#include "csr/experiment.hpp"

using namespace csr;
namespace fs = std::filesystem;

namespace {

struct SampleRow {
    double d;
    std::uint64_t seed;
    int ap, sta;
    std::string scheme;
    double bps;
};

std::vector<SampleRow> read_samples(const fs::path& dir) {
    std::ifstream in(dir / "samples.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);  // header
    std::vector<SampleRow> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        SampleRow r;
        std::string tok;
        std::getline(ss, tok, ','); r.d = std::stod(tok);
        std::getline(ss, tok, ','); r.seed = std::stoull(tok);
        std::getline(ss, tok, ','); r.ap = std::stoi(tok);
        std::getline(ss, tok, ','); r.sta = std::stoi(tok);
        std::getline(ss, r.scheme, ',');
        std::getline(ss, tok, ','); r.bps = std::stod(tok);
        rows.push_back(r);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepSpec small_spec(const std::string& dir) {
    SweepSpec spec;
    spec.d_ap_ap_list = {5.0, 20.0};
    spec.n_deployments = 3;
    spec.stas_per_ap = 2;
    spec.base_seed = 42;
    spec.output_dir = dir;
    return spec;
}

} // namespace

TEST_CASE("sweep writes the expected number of sample rows") {
    const auto dir = fs::temp_directory_path() / "csr_sweep_count";
    fs::remove_all(dir);
    const SweepSpec spec = small_spec(dir.string());
    run_sweep(spec, default_radio_config(), MacTiming{}, ContentionParams{});
    const auto rows = read_samples(dir);
    // n_deployments * K * stas_per_ap per scheme and distance
    const std::size_t per_block = 3u * 4u * 2u;
    CHECK(rows.size() == per_block * 2 * 2);
    for (const char* scheme : {"csr", "dcf"})
        for (double d : {5.0, 20.0})
            CHECK(std::count_if(rows.begin(), rows.end(), [&](const SampleRow& r) {
                      return r.scheme == scheme && r.d == d;
                  }) == static_cast<long>(per_block));
    fs::remove_all(dir);
}

TEST_CASE("cdf files are sorted non-decreasing") {
    const auto dir = fs::temp_directory_path() / "csr_sweep_cdf";
    fs::remove_all(dir);
    run_sweep(small_spec(dir.string()), default_radio_config(), MacTiming{},
              ContentionParams{});
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().filename().string().rfind("cdf_", 0) != 0) continue;
        std::ifstream in(entry.path());
        std::string line;
        std::getline(in, line);
        double prev = -1.0;
        while (std::getline(in, line)) {
            const double v = std::stod(line.substr(0, line.find(',')));
            CHECK(v >= prev);
            prev = v;
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("summary medians are recomputable from the sample file") {
    const auto dir = fs::temp_directory_path() / "csr_sweep_median";
    fs::remove_all(dir);
    const SweepSpec spec = small_spec(dir.string());
    const SweepResult res = run_sweep(spec, default_radio_config(), MacTiming{},
                                      ContentionParams{});
    const auto rows = read_samples(dir);
    for (double d : spec.d_ap_ap_list) {
        std::vector<double> gains;
        for (const auto& r : rows) {
            if (r.scheme != "csr" || r.d != d) continue;
            const auto dcf = std::find_if(
                rows.begin(), rows.end(), [&](const SampleRow& q) {
                    return q.scheme == "dcf" && q.d == d && q.seed == r.seed &&
                           q.sta == r.sta;
                });
            REQUIRE(dcf != rows.end());
            gains.push_back(r.bps / dcf->bps - 1.0);
        }
        std::sort(gains.begin(), gains.end());
        const double median =
            gains.size() % 2
                ? gains[gains.size() / 2]
                : 0.5 * (gains[gains.size() / 2 - 1] + gains[gains.size() / 2]);
        CHECK(res.median_gain.at(d) == Catch::Approx(median).epsilon(1e-9));
    }
    fs::remove_all(dir);
}

TEST_CASE("same base seed reproduces byte-identical outputs") {
    const auto dir_a = fs::temp_directory_path() / "csr_sweep_det_a";
    const auto dir_b = fs::temp_directory_path() / "csr_sweep_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    run_sweep(small_spec(dir_a.string()), default_radio_config(), MacTiming{},
              ContentionParams{});
    run_sweep(small_spec(dir_b.string()), default_radio_config(), MacTiming{},
              ContentionParams{});
    CHECK(slurp(dir_a / "samples.csv") == slurp(dir_b / "samples.csv"));
    CHECK(slurp(dir_a / "summary.json") == slurp(dir_b / "summary.json"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("model config round-trips through JSON") {
    ModelConfig cfg;
    cfg.timing.t_mapc = 300e-6;
    cfg.contention.cw_min = 31;
    const ModelConfig back = model_config_from_json(model_config_to_json(cfg));
    CHECK(back.timing.t_mapc == Catch::Approx(300e-6).epsilon(1e-12));
    CHECK(back.contention.cw_min == 31);
    CHECK(back.radio.mcs_table.size() == cfg.radio.mcs_table.size());
}
