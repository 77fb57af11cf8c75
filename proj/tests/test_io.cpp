#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hjac/bench.hpp"
#include "hjac/matrix_io.hpp"
#include "hjac/testmatrix.hpp"
#include "support.hpp"

namespace hjac {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("hjac_") + info->test_suite_name() + "_" + info->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

TEST(MatrixIo, BinaryRoundTripIsBitExact) {
  TempDir dir;
  Rng rng(81);
  const auto c = testing::random_matrix<complex128>(7, 5, rng);
  write_matrix(dir.file("c.bin"), c);
  EXPECT_EQ(std::get<DenseMatrix<complex128>>(read_matrix(dir.file("c.bin"))), c);
  const auto r = testing::random_matrix<double>(3, 9, rng);
  write_matrix(dir.file("r.bin"), r);
  EXPECT_EQ(std::get<DenseMatrix<double>>(read_matrix(dir.file("r.bin"))), r);
}

TEST(MatrixIo, TextRoundTripIsBitExact) {
  TempDir dir;
  Rng rng(82);
  const auto c = testing::random_matrix<complex128>(4, 3, rng);
  write_matrix_text(dir.file("c.txt"), c);
  EXPECT_EQ(std::get<DenseMatrix<complex128>>(read_matrix(dir.file("c.txt"))), c);
  const auto r = testing::random_matrix<double>(2, 6, rng);
  write_matrix_text(dir.file("r.txt"), r);
  EXPECT_EQ(std::get<DenseMatrix<double>>(read_matrix(dir.file("r.txt"))), r);
}

TEST(MatrixIo, EmptyMatrixRoundTrips) {
  TempDir dir;
  write_matrix(dir.file("e.bin"), DenseMatrix<double>(0, 0));
  const auto e = std::get<DenseMatrix<double>>(read_matrix(dir.file("e.bin")));
  EXPECT_EQ(e.rows(), 0u);
  EXPECT_EQ(e.cols(), 0u);
}

TEST(MatrixIo, RejectsMalformedFiles) {
  TempDir dir;
  {
    std::ofstream out(dir.file("magic.bin"), std::ios::binary);
    out << "NOPE and some more bytes to look like a header";
  }
  EXPECT_THROW(read_matrix(dir.file("magic.bin")), InputError);

  write_matrix(dir.file("full.bin"), DenseMatrix<double>::identity(4));
  const auto size = fs::file_size(dir.file("full.bin"));
  fs::copy_file(dir.file("full.bin"), dir.file("cut.bin"));
  fs::resize_file(dir.file("cut.bin"), size - 8);
  EXPECT_THROW(read_matrix(dir.file("cut.bin")), InputError);

  {
    std::fstream f(dir.file("full.bin"),
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(4);
    const char version[4] = {9, 0, 0, 0};
    f.write(version, 4);
  }
  EXPECT_THROW(read_matrix(dir.file("full.bin")), InputError);
  EXPECT_THROW(read_matrix(dir.file("missing.bin")), InputError);
}

TEST(MatrixIo, SignsAndValues) {
  TempDir dir;
  DenseMatrix<double> row{{1, -1, -1, 1}};
  write_matrix_text(dir.file("j.txt"), row);
  EXPECT_EQ(read_signs(dir.file("j.txt")), (SignVector{1, -1, -1, 1}));
  DenseMatrix<double> bad{{1, 0.5}};
  write_matrix_text(dir.file("bad.txt"), bad);
  EXPECT_THROW(read_signs(dir.file("bad.txt")), InputError);

  const std::vector<double> v{1.0 / 3.0, -2.5e-300, 7};
  write_values(dir.file("v.txt"), v);
  EXPECT_EQ(read_values(dir.file("v.txt")), v);
}

TEST(EigSpecTest, Parsing) {
  const auto list = EigSpec::parse("1,2,-3", 0.0, 1);
  EXPECT_EQ(list.mode, EigSpec::Mode::list);
  EXPECT_EQ(list.values, (std::vector<double>{1, 2, -3}));
  const auto log = EigSpec::parse("log:1e-4:1", 0.25, 1);
  EXPECT_EQ(log.mode, EigSpec::Mode::log_uniform);
  EXPECT_EQ(log.lo, 1e-4);
  EXPECT_EQ(log.hi, 1.0);
  EXPECT_EQ(EigSpec::parse("uni:0.5:2", 0, 1).mode, EigSpec::Mode::uniform);
  EXPECT_THROW(EigSpec::parse("log:2:1", 0, 1), InputError);
  EXPECT_THROW(EigSpec::parse("uni:-1:1", 0, 1), InputError);
  EXPECT_THROW(EigSpec::parse("1,0,2", 0, 1), InputError);
  EXPECT_THROW(EigSpec::parse("log:1e-3:1", 1.5, 1), InputError);
}

TEST(EigSpecTest, DrawnValuesRespectRangeAndSigns) {
  const auto spec = EigSpec::parse("log:1e-3:1", 0.25, 9);
  const auto v = draw_eigenvalues(40, spec);
  ASSERT_EQ(v.size(), 40u);
  std::size_t negative = 0;
  for (double x : v) {
    EXPECT_GE(std::abs(x), 1e-3);
    EXPECT_LE(std::abs(x), 1.0);
    negative += x < 0 ? 1 : 0;
  }
  EXPECT_EQ(negative, 10u);
  EXPECT_EQ(draw_eigenvalues(40, spec), v);
  EXPECT_THROW(draw_eigenvalues(4, EigSpec::parse("1,2,3", 0, 1)), InputError);
}

TEST(TestMatrixGen, ListSpectrumRecovered) {
  const auto tm = generate_test_matrix<double>(3, EigSpec::parse("1,2,3", 0, 4));
  EXPECT_LT(testing::max_relative_gap(testing::oracle_eigenvalues(tm.h),
                                      {1, 2, 3}),
            1e-12);
  const auto one = generate_test_matrix<double>(1, EigSpec::parse("-5", 0, 4));
  EXPECT_EQ(one.h, (DenseMatrix<double>{{-5}}));
}

TEST(TestMatrixGen, ExactlyHermitianAndSpectrumMatches) {
  for (std::size_t n : {10, 64, 200}) {
    const auto spec = EigSpec::parse("log:1e-3:1", 0.5, n);
    const auto tm = generate_test_matrix<complex128>(n, spec);
    EXPECT_EQ(hermitian_defect(cview(tm.h)), 0.0);
    EXPECT_LT(testing::max_relative_gap(testing::oracle_eigenvalues(tm.h),
                                        tm.eigenvalues),
              1e-10);
  }
}

TEST(TestMatrixGen, SeedDeterminesMatrix) {
  const auto spec = EigSpec::parse("uni:1:2", 0.5, 3);
  EXPECT_EQ(generate_test_matrix<double>(12, spec).h,
            generate_test_matrix<double>(12, spec).h);
  const auto other = EigSpec::parse("uni:1:2", 0.5, 4);
  EXPECT_NE(generate_test_matrix<double>(12, spec).h,
            generate_test_matrix<double>(12, other).h);
}

TEST(Bench, ScalingConstant) {
  EXPECT_DOUBLE_EQ(scaling_constant(8.0, 2000, 4), 4e-9);
  EXPECT_DOUBLE_EQ(scaling_constant(2.0, 100, 1), 2.0 / 1e6);
}

TEST(Bench, CsvFormat) {
  EXPECT_EQ(bench_csv_header(),
            "variant,strategy,scalar,n,p,nt_outer,nt_inner,sweeps,rotations,"
            "time_s,c,status");
  BenchRecord r;
  r.variant = "3B";
  r.strategy = "rr";
  r.scalar = "real";
  r.n = 64;
  r.p = 2;
  r.nt_outer = 16;
  r.nt_inner = 8;
  r.sweeps = 7;
  r.rotations = 1234;
  r.time_s = 0.5;
  r.c = 0.25;
  r.status = "error: a, b";
  EXPECT_EQ(r.csv_row(), "3B,rr,real,64,2,16,8,7,1234,0.5,0.25,error: a; b");
}

TEST(Bench, GridFromJson) {
  const auto g = BenchGrid::from_json(
      R"({"n": [32, 64], "p": [1, 2], "variants": ["seq", "2B"],
          "strategies": ["rr"], "reps": 2, "warmup": 0, "seed": 7})");
  EXPECT_EQ(g.sizes, (std::vector<std::size_t>{32, 64}));
  EXPECT_EQ(g.variants, (std::vector<Variant>{Variant::seq, Variant::p2B}));
  EXPECT_EQ(g.strategies, (std::vector<Strategy>{Strategy::round_robin}));
  EXPECT_EQ(g.reps, 2);
  EXPECT_EQ(g.seed, 7u);
  EXPECT_THROW(BenchGrid::from_json("{\"n\": "), InputError);
  EXPECT_THROW(BenchGrid::from_json(R"({"variants": ["5F"]})"), InputError);
}

TEST(Bench, RunsGridAndIsDeterministic) {
  auto g = BenchGrid::from_json(
      R"({"n": [24], "p": [1, 2], "variants": ["seq", "2F", "3B"],
          "inner_nt": [4], "reps": 2, "warmup": 0})");
  std::size_t streamed = 0;
  const auto records = run_bench(g, [&](const BenchRecord&) { ++streamed; });
  // seq only at p = 1, the parallel variants at both worker counts.
  ASSERT_EQ(records.size(), 5u);
  EXPECT_EQ(streamed, 5u);
  for (const auto& r : records) {
    EXPECT_EQ(r.status, "ok") << r.variant << " p=" << r.p;
    EXPECT_GT(r.rotations, 0u);
    EXPECT_DOUBLE_EQ(r.c, scaling_constant(r.time_s, r.n, r.p));
  }
  const auto again = run_bench(g);
  for (std::size_t k = 0; k < records.size(); ++k) {
    EXPECT_EQ(records[k].sweeps, again[k].sweeps);
    EXPECT_EQ(records[k].rotations, again[k].rotations);
  }
}

TEST(Bench, FailedCellIsRecorded) {
  // 2p = 8 blocks do not fit 6 columns.
  auto g = BenchGrid::from_json(R"({"n": [6], "p": [4], "variants": ["2F"],
                                    "reps": 1, "warmup": 0})");
  const auto records = run_bench(g);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].status.rfind("error: ", 0), 0u);
}

}  // namespace
}  // namespace hjac
