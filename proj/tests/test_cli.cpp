#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "pouchsim/bench_oracle.hpp"
#include "pouchsim/text.hpp"

namespace fs = std::filesystem;
using namespace pouchsim;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args) {
    const std::string cmd = std::string(POUCHSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

class CliTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        root_ = fs::temp_directory_path() / ("pouchsim_cli_" + std::to_string(::getpid()));
        fs::create_directories(root_);
        // One tiny model shared by the model-consuming commands.
        ASSERT_EQ(cli("--out-dir " + dir("shared") + " gen-data").code, 0);
        ASSERT_EQ(cli("--out-dir " + dir("shared") + " train --epochs 1 --data " + dir("shared") + "/dataset.csv").code, 0);
    }
    static void TearDownTestSuite() { fs::remove_all(root_); }

    static std::string dir(const std::string& name) { return (root_ / name).string(); }
    static std::string shared(const std::string& file) { return (root_ / "shared" / file).string(); }

    static inline fs::path root_;
};

}  // namespace

TEST_F(CliTest, GenDataDefaultGrid) {
    const auto lines = text::split_lines(text::read_file(shared("dataset.csv")));
    EXPECT_EQ(lines.size(), 2161u);
    EXPECT_EQ(lines[0], kDatasetHeader);
}

TEST_F(CliTest, GenDataDeterministic) {
    ASSERT_EQ(cli("--out-dir " + dir("gen2") + " gen-data").code, 0);
    EXPECT_EQ(text::read_file(dir("gen2") + "/dataset.csv"), text::read_file(shared("dataset.csv")));
    ASSERT_EQ(cli("--seed 7 --out-dir " + dir("gen3") + " gen-data").code, 0);
    EXPECT_NE(text::read_file(dir("gen3") + "/dataset.csv"), text::read_file(shared("dataset.csv")));
}

TEST_F(CliTest, GenDataNoiselessMatchesOracle) {
    ASSERT_EQ(cli("--out-dir " + dir("clean") + " gen-data --noisy=false --out clean.csv").code, 0);
    const auto data = read_dataset_csv(dir("clean") + "/clean.csv");
    ASSERT_EQ(data.size(), 2160u);
    for (const auto& s : data) {
        const auto t = oracle_triple(s.design);
        EXPECT_NEAR(s.measured.alpha, t.alpha, 1e-8);
        EXPECT_NEAR(s.measured.generated_pressure_kpa, t.generated_pressure_kpa, 1e-8 * t.generated_pressure_kpa);
        EXPECT_NEAR(s.measured.recovery_time_s, t.recovery_time_s, 1e-8 * t.recovery_time_s);
    }
}

TEST_F(CliTest, GenDataInlineGridAndErrors) {
    ASSERT_EQ(cli("--out-dir " + dir("small") + " gen-data --lengths 120,130 --widths 25 --turns 1 --pressures 30 --covers paper --structures type4").code, 0);
    EXPECT_EQ(text::split_lines(text::read_file(dir("small") + "/dataset.csv")).size(), 3u);
    EXPECT_EQ(cli("--out-dir " + dir("bad") + " gen-data --pressures 120").code, 2);
    EXPECT_EQ(cli("--out-dir " + dir("bad") + " gen-data --covers ppet").code, 2);
    EXPECT_EQ(cli("gen-data --bogus").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("--out-dir /proc/pouchsim_no_such gen-data").code, 3);
}

TEST_F(CliTest, GridFile) {
    fs::create_directories(dir("gridfile"));
    text::write_file(dir("gridfile") + "/grid.json", R"({"lengths_mm": [130], "widths_mm": [25], "turns": [1]})");
    const auto r = cli("--out-dir " + dir("gridfile") + " optimize --use-oracle --grid-file " + dir("gridfile") + "/grid.json");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "evaluated=36"));
    text::write_file(dir("gridfile") + "/bad.json", R"({"lengths": [130]})");
    EXPECT_EQ(cli("optimize --use-oracle --grid-file " + dir("gridfile") + "/bad.json").code, 2);
    EXPECT_EQ(cli("optimize --use-oracle --grid-file " + dir("gridfile") + "/missing.json").code, 3);
}

TEST_F(CliTest, TrainOneEpochWritesArtifacts) {
    EXPECT_TRUE(fs::exists(shared("model.json")));
    EXPECT_TRUE(fs::exists(shared("metrics.csv")));
    EXPECT_TRUE(fs::exists(shared("loss_history.csv")));
    for (const char* name : {"alpha", "generated_pressure_kpa", "recovery_time_s"}) {
        const auto lines = text::split_lines(text::read_file(shared(std::string("hist_") + name + ".csv")));
        EXPECT_EQ(lines[0], "bin_lo,bin_hi,count");
        long total = 0;
        for (std::size_t i = 1; i < lines.size(); ++i)
            if (!lines[i].empty()) total += std::stol(std::string(text::split_fields(lines[i])[2]));
        EXPECT_EQ(total, 432);  // 20% of 2160
    }
}

TEST_F(CliTest, TrainPrintsMetrics) {
    const auto r = cli("--out-dir " + dir("train2") + " train --epochs 1 --data " + shared("dataset.csv"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "aggregate"));
    EXPECT_TRUE(contains(r.out, "r2="));
    EXPECT_EQ(text::read_file(dir("train2") + "/model.json"), text::read_file(shared("model.json")));
}

TEST_F(CliTest, TrainErrors) {
    EXPECT_EQ(cli("--out-dir " + dir("t3") + " train --data /nonexistent.csv").code, 3);
    EXPECT_EQ(cli("--out-dir " + dir("t3") + " train --epochs 0 --data " + shared("dataset.csv")).code, 2);
    fs::create_directories(dir("t3"));
    text::write_file(dir("t3") + "/broken.csv", std::string(kDatasetHeader) + "\n130,25,1,30,ppet,type4,1,9.8,3\n");
    EXPECT_EQ(cli("--out-dir " + dir("t3") + " train --data " + dir("t3") + "/broken.csv").code, 3);
}

TEST_F(CliTest, OptimizeWithOracle) {
    const auto r = cli("--out-dir " + dir("opt") + " optimize --use-oracle");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "best: (130, 25, 1, 30, paper, type4)"));
    const auto ranking = text::split_lines(text::read_file(dir("opt") + "/ranking.csv"));
    EXPECT_EQ(ranking[0], "rank,f,length_mm,width_mm,turns,pressure_kpa,cover,structure,alpha,pg_kpa,t_s");
    EXPECT_EQ(ranking.size(), 11u);
    EXPECT_EQ(text::read_file(dir("opt") + "/report.txt"), r.out);
}

TEST_F(CliTest, OptimizeWithModel) {
    const auto r = cli("--out-dir " + dir("optm") + " optimize --top-k 3 --model " + shared("model.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "best: ("));
    EXPECT_EQ(text::split_lines(text::read_file(dir("optm") + "/ranking.csv")).size(), 4u);
}

TEST_F(CliTest, OptimizeErrors) {
    const auto r = cli("--out-dir " + dir("optx") + " optimize --use-oracle --pressures 80 --material hdpe");
    EXPECT_EQ(r.code, 4);
    EXPECT_EQ(cli("optimize").code, 2);
    EXPECT_EQ(cli("optimize --use-oracle --material pet").code, 2);
    EXPECT_EQ(cli("optimize --model /nonexistent/model.json").code, 3);
}

TEST_F(CliTest, ImportanceDeterministic) {
    const auto a = cli("--out-dir " + dir("imp") + " importance --repeats 2 --model " + shared("model.json") + " --data " + shared("dataset.csv"));
    const auto b = cli("--out-dir " + dir("imp2") + " importance --repeats 2 --model " + shared("model.json") + " --data " + shared("dataset.csv"));
    ASSERT_EQ(a.code, 0);
    const auto lines = text::split_lines(text::read_file(dir("imp") + "/importance.csv"));
    EXPECT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0], "feature,score");
    EXPECT_EQ(text::read_file(dir("imp") + "/importance.csv"), text::read_file(dir("imp2") + "/importance.csv"));
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(cli("importance --model /nonexistent/model.json --data " + shared("dataset.csv")).code, 3);
}

TEST_F(CliTest, SimulateScenarios) {
    const auto cut = cli("--out-dir " + dir("sim") + " simulate --scenario cut --t0 12 --t1 2 --t2 2");
    EXPECT_EQ(cut.code, 0);
    EXPECT_FALSE(contains(cut.out, "cuts=0"));
    EXPECT_TRUE(fs::exists(dir("sim") + "/trace.csv"));
    EXPECT_TRUE(fs::exists(dir("sim") + "/cuts.csv"));

    const auto diarrhea = cli("--out-dir " + dir("sim2") + " simulate --scenario diarrhea --hold 10");
    EXPECT_EQ(diarrhea.code, 0);
    EXPECT_TRUE(contains(diarrhea.out, "status=expelled"));

    const auto blocked = cli("--out-dir " + dir("sim3") + " simulate --bolus-diameter 35 --bolus-shape sphere");
    EXPECT_EQ(blocked.code, 0);
    EXPECT_TRUE(contains(blocked.out, "status=blocked"));
    EXPECT_TRUE(contains(cli("--out-dir " + dir("sim3") + " simulate --bolus-diameter 35").out, "status=blocked"));
}

TEST_F(CliTest, SimulateDeterministicAndValidated) {
    ASSERT_EQ(cli("--out-dir " + dir("simA") + " simulate --scenario long --bolus-length 150").code, 0);
    ASSERT_EQ(cli("--out-dir " + dir("simB") + " simulate --scenario long --bolus-length 150").code, 0);
    EXPECT_EQ(text::read_file(dir("simA") + "/trace.csv"), text::read_file(dir("simB") + "/trace.csv"));
    EXPECT_EQ(cli("simulate --scenario long --t-quarter 0.05").code, 2);
    EXPECT_EQ(cli("simulate --scenario sideways").code, 2);
    EXPECT_EQ(cli("simulate --dt 0.5").code, 2);
}

TEST_F(CliTest, Predict) {
    const auto r = cli("predict --model " + shared("model.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "alpha="));
    EXPECT_TRUE(contains(r.out, " f="));
    EXPECT_EQ(cli("predict --width 45 --model " + shared("model.json")).code, 2);
    EXPECT_EQ(cli("predict --cover ppet --model " + shared("model.json")).code, 2);
}
