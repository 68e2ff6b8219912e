#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "c2r/compiler/compiler.hpp"
#include "c2r/error.hpp"
#include "c2r/metrics/metrics.hpp"
#include "c2r/util/files.hpp"
#include "paths.hpp"
#include "perturb.hpp"
#include "unsafe_oracle.hpp"

using namespace c2r::metrics;
using c2r::translator::TestCase;

namespace {

ExecResult out(std::string s, bool timed_out = false) {
    ExecResult r;
    r.stdout_text = std::move(s);
    r.timed_out = timed_out;
    return r;
}

JobRow row(std::string id, bool compiled, std::optional<int> ca, std::size_t total = 10, std::size_t unsafe = 0) {
    UnsafeScan s;
    s.total_code_lines = total;
    s.unsafe_lines = unsafe;
    return make_row(std::move(id), compiled, ca, s, 0);
}

}  // namespace

TEST(Normalize, TrailingWhitespaceAndBlankLines) {
    EXPECT_EQ(normalize_output("a  \nb\t\n\n\n"), "a\nb");
    EXPECT_EQ(normalize_output("a\r\nb\r\n"), "a\nb");
    EXPECT_EQ(normalize_output(""), "");
    EXPECT_EQ(normalize_output("\n\n"), "");
    EXPECT_EQ(normalize_output("  lead"), "  lead");
    EXPECT_EQ(normalize_output("a\n\nb"), "a\n\nb");
}

TEST(CaOne, AllMatchOrZero) {
    const std::vector<TestCase> cases{{"1", "2\n"}, {"3", "4\n"}};
    std::vector<ExecResult> good{out("2"), out("4  \n\n")};
    EXPECT_EQ(ca_one(good, cases), 1);
    std::vector<ExecResult> one_bad{out("2\n"), out("5\n")};
    EXPECT_EQ(ca_one(one_bad, cases), 0);
    std::vector<ExecResult> timeout{out("2\n"), out("4\n", true)};
    EXPECT_EQ(ca_one(timeout, cases), 0);
    std::vector<ExecResult> short_results{out("2\n")};
    EXPECT_THROW(ca_one(short_results, cases), std::invalid_argument);
    EXPECT_FALSE(ca_one({}, {}).has_value());
}

TEST(CaOne, ExitCodeIgnored) {
    const std::vector<TestCase> cases{{"", "x\n"}};
    auto r = out("x\n");
    r.exit_code = 3;
    std::vector<ExecResult> rs{r};
    EXPECT_EQ(ca_one(rs, cases), 1);
}

// Perturbations that normalization removes never flip the result; any
// single content change flips it to 0.
TEST(CaOne, PerturbationProperties) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        auto pc = c2r::test::perturbed_case(rng);
        ASSERT_EQ(ca_one(pc.results, pc.cases), 1) << trial;
        c2r::test::break_one(pc.results, rng);
        EXPECT_EQ(ca_one(pc.results, pc.cases), 0) << trial;
    }
}

TEST(Unsafe, GeneratedProgramsMatchOracle) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto prog = c2r::test::UnsafeProgramBuilder(seed).build();
        const auto scan = scan_unsafe(prog.text);
        ASSERT_EQ(scan.total_code_lines, prog.code_lines) << "seed " << seed << "\n" << prog.text;
        ASSERT_EQ(scan.unsafe_lines, prog.unsafe_lines) << "seed " << seed << "\n" << prog.text;
        ASSERT_EQ(scan.regions, prog.regions) << "seed " << seed << "\n" << prog.text;
    }
}

TEST(Unsafe, ThreeOfTenFixture) {
    const auto scan = scan_unsafe(c2r::util::read_file(c2r::test::fixture("ulr_3_of_10.rs")));
    EXPECT_EQ(scan.total_code_lines, 10u);
    EXPECT_EQ(scan.unsafe_lines, 3u);
    const auto r = make_row("ulr", true, std::nullopt, scan, 0);
    EXPECT_DOUBLE_EQ(r.unsafe_line_ratio, 30.0);
}

TEST(Unsafe, FourFileSetRate) {
    std::vector<JobRow> rows;
    for (auto name : {"a.rs", "b.rs", "c.rs", "d.rs"})
        rows.push_back(make_row(name, true, std::nullopt,
                                scan_unsafe(c2r::util::read_file(c2r::test::fixture(std::string("unsafe_set/") + name))), 0));
    EXPECT_DOUBLE_EQ(aggregate(rows).ur, 25.0);
}

TEST(Unsafe, EdgeCases) {
    EXPECT_EQ(scan_unsafe("").total_code_lines, 0u);
    EXPECT_EQ(scan_unsafe("").ratio(), 0.0);
    // unbalanced: region runs to the end
    const auto s = scan_unsafe("fn main() {\n    unsafe {\n        f();\n\n");
    EXPECT_EQ(s.regions, (std::vector<std::pair<int, int>>{{2, 5}}));
    EXPECT_EQ(s.unsafe_lines, 2u);
    const auto decl = scan_unsafe("extern \"C\" {\n    unsafe fn f();\n    fn g();\n}\n");
    EXPECT_EQ(decl.regions, (std::vector<std::pair<int, int>>{{2, 2}}));
    EXPECT_EQ(scan_unsafe("let u = 'u'; let s = \"unsafe\";").unsafe_lines, 0u);
}

TEST(Aggregate, Formulas) {
    std::vector<JobRow> rows;
    for (int i = 0; i < 10; ++i) rows.push_back(row("j" + std::to_string(i), true, i < 7 ? 1 : 0));
    const auto r = aggregate(rows);
    EXPECT_DOUBLE_EQ(r.ca, 70.0);
    EXPECT_DOUBLE_EQ(r.csr, 100.0);
    EXPECT_EQ(r.ur, 0.0);
    EXPECT_EQ(r.ca_eligible, 10u);

    std::vector<JobRow> mixed{row("a", true, 1, 10, 3), row("b", false, 1, 4, 0), row("c", true, std::nullopt, 5, 5),
                              row("d", true, 0, 8, 0)};
    const auto m = aggregate(mixed);
    EXPECT_EQ(mixed[1].ca, 0);  // non-compiling forces 0
    EXPECT_EQ(m.ca_eligible, 3u);
    EXPECT_NEAR(m.ca, 100.0 / 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(m.csr, 75.0);
    EXPECT_DOUBLE_EQ(m.ur, 50.0);
    EXPECT_DOUBLE_EQ(m.ulr, (30.0 + 0.0 + 100.0 + 0.0) / 4.0);
}

TEST(Aggregate, EmptyDatasetThrows) {
    try {
        aggregate({});
        FAIL();
    } catch (const c2r::EmptyDataset& e) {
        EXPECT_STREQ(e.what(), "EmptyDataset: no samples to evaluate");
    }
}

TEST(Aggregate, NoEligibleJobsGivesZeroCa) {
    std::vector<JobRow> rows{row("a", true, std::nullopt)};
    EXPECT_EQ(aggregate(rows).ca, 0.0);
}

TEST(Property, CaNeverExceedsCsrWhenAllJobsHaveTests) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<JobRow> rows;
        const int n = 1 + static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            const std::size_t total = rng() % 50;
            const std::size_t unsafe = total ? rng() % (total + 1) : 0;
            rows.push_back(row("j" + std::to_string(i), rng() % 3 != 0, static_cast<int>(rng() % 2), total, unsafe));
        }
        const auto r = aggregate(rows);
        EXPECT_LE(r.ca, r.csr + 1e-12);
        EXPECT_GE(r.ulr, 0.0);
        EXPECT_LE(r.ulr, 100.0);
        EXPECT_LE(r.ur, 100.0);
        for (const auto& jr : r.rows) EXPECT_LE(jr.unsafe_lines, jr.total_code_lines);
    }
}

TEST(Report, JsonRoundTrip) {
    std::vector<JobRow> rows{row("a", true, 1, 10, 3), row("b", false, std::nullopt, 0, 0)};
    rows[1].error = "translate failed";
    const auto r = aggregate(rows);
    const auto back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_EQ(back.rows, r.rows);
    EXPECT_EQ(back.ca, r.ca);
    EXPECT_EQ(back.ulr, r.ulr);
    EXPECT_THROW(report_from_json(nlohmann::json::object()), c2r::MalformedRecord);
    EXPECT_THROW(report_from_json(nlohmann::json::parse(R"({"rows":[]})")), c2r::EmptyDataset);
    EXPECT_THROW(report_from_json(nlohmann::json::parse(R"({"rows":[{"id":"x"}]})")), c2r::MalformedRecord);
}

TEST(Report, TextAndCsv) {
    std::vector<JobRow> rows{row("a", true, 1, 10, 3), row("b", true, 0)};
    const auto r = aggregate(rows);
    const auto text = render_text(r);
    EXPECT_NE(text.find("CA:   50.00"), std::string::npos) << text;
    EXPECT_NE(text.find("CSR: 100.00"), std::string::npos);
    EXPECT_NE(text.find("jobs: 2 (CA over 2)"), std::string::npos);
    EXPECT_NE(text.find("3/10"), std::string::npos);
    EXPECT_NE(text.find("UR:   50.00"), std::string::npos);
    EXPECT_NE(text.find("ULR:  15.00"), std::string::npos);
    std::vector<std::pair<int, MetricsReport>> sweep{{0, r}, {1, r}};
    const auto csv = sweep_csv(sweep);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "iterations,n_jobs,ca,csr,ur,ulr");
    EXPECT_NE(csv.find("\n1,2,"), std::string::npos);
}

TEST(Exec, RunsCompiledProgram) {
    c2r::compiler::RustCompiler rustc;
    const auto dir = c2r::test::scratch("exec");
    const auto built = rustc.compile(
        "use std::io::Read;\nfn main() {\n    let mut s = String::new();\n    std::io::stdin().read_to_string(&mut s).unwrap();\n"
        "    let n: i64 = s.trim().parse().unwrap();\n    if n < 0 { loop {} }\n    println!(\"{}\", n * 2);\n}\n",
        dir);
    ASSERT_TRUE(built.success);
    const auto r = run_program(*built.artifact_path, "21\n");
    EXPECT_EQ(r.stdout_text, "42\n");
    EXPECT_FALSE(r.timed_out);
    const std::vector<TestCase> cases{{"1", "2"}, {"5", "10\n"}};
    EXPECT_EQ(evaluate_executable(*built.artifact_path, cases), 1);
    const std::vector<TestCase> hang{{"-1", ""}};
    EXPECT_EQ(evaluate_executable(*built.artifact_path, hang, std::chrono::milliseconds(300)), 0);
    EXPECT_THROW(run_program(dir / "nope", ""), c2r::SpawnError);
}
