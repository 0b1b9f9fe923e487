#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "splr/io.hpp"
#include "support/oracles.hpp"

using namespace splr;

TEST(Csv, ParsesRows) {
  std::istringstream in("1,2\n3,4");
  Mat expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(io::read_csv(in), expected);
}

TEST(Csv, ToleratesWhitespaceAndBlankLines) {
  std::istringstream in(" 1.5 , -2e-3\r\n\n+3,4\n");
  const Mat m = io::read_csv(in);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 1), -2e-3);
  EXPECT_EQ(m(1, 0), 3.0);
}

TEST(Csv, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(1);
  Mat m = oracle::random_matrix(rng, 7, 5, 1e3);
  m(0, 0) = 1e-310;  // subnormal
  m(1, 1) = -0.0;
  m(2, 2) = 0.1;
  std::stringstream buf;
  io::write_csv(buf, m);
  const Mat back = io::read_csv(buf);
  ASSERT_EQ(back.rows(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) EXPECT_EQ(back(i, j), m(i, j));
  EXPECT_TRUE(std::signbit(back(1, 1)));
}

TEST(Csv, RaggedRowNamesLine) {
  std::istringstream in("1,2\n3\n");
  try {
    io::read_csv(in, "ragged.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("ragged.csv:2"), std::string::npos);
  }
}

TEST(Csv, NonNumericTokenNamesLine) {
  std::istringstream in("1,2\n3,4\n5,x\n");
  try {
    io::read_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream nan_in("nan,1\n");
  EXPECT_THROW(io::read_csv(nan_in), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(io::read_csv(empty), ParseError);
}

TEST(MatrixMarket, GeneralRoundTrip) {
  std::mt19937_64 rng(2);
  const Mat m = oracle::random_matrix(rng, 3, 4);
  std::stringstream buf;
  io::write_matrix_market(buf, m);
  EXPECT_EQ(io::read_matrix_market(buf), m);
}

TEST(MatrixMarket, SymmetricLowerTriangle) {
  std::istringstream in(
      "%%MatrixMarket matrix array real symmetric\n% comment\n2 2\n1\n2\n3\n");
  Mat expected(2, 2);
  expected << 1, 2, 2, 3;
  EXPECT_EQ(io::read_matrix_market(in), expected);
}

TEST(MatrixMarket, Errors) {
  std::istringstream coord("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n");
  EXPECT_THROW(io::read_matrix_market(coord), ParseError);
  std::istringstream short_values("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
  EXPECT_THROW(io::read_matrix_market(short_values), ParseError);
  std::istringstream no_banner("2 2\n1\n2\n3\n4\n");
  EXPECT_THROW(io::read_matrix_market(no_banner), ParseError);
}

TEST(Files, FormatFromExtensionAndMissingFile) {
  EXPECT_EQ(io::format_from_path("a/b.mtx"), io::MatrixFormat::MatrixMarketArray);
  EXPECT_EQ(io::format_from_path("a/b.csv"), io::MatrixFormat::Csv);
  EXPECT_THROW(io::parse_dense_matrix("/nonexistent/x.csv", io::MatrixFormat::Csv), IoError);
}

TEST(Files, WriteThenParse) {
  const auto dir = std::filesystem::temp_directory_path() / "splr_io_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(3);
  const Mat m = oracle::random_matrix(rng, 4, 4);
  for (auto fmt : {io::MatrixFormat::Csv, io::MatrixFormat::MatrixMarketArray}) {
    const auto path = (dir / (fmt == io::MatrixFormat::Csv ? "m.csv" : "m.mtx")).string();
    io::write_dense_matrix(path, m, fmt);
    EXPECT_EQ(io::parse_dense_matrix(path, fmt), m);
  }
  std::filesystem::remove_all(dir);
}

TEST(EdgeList, PathGraph) {
  std::istringstream in("0 1\n1 2\n");
  const io::EdgeList g = io::read_edge_list(in);
  Mat expected = Mat::Zero(3, 3);
  expected(0, 1) = expected(1, 0) = expected(1, 2) = expected(2, 1) = 1;
  EXPECT_EQ(g.adjacency, expected);
  EXPECT_TRUE(g.warnings.empty());
}

TEST(EdgeList, HeaderOnly) {
  std::istringstream in("# n=4\n");
  EXPECT_EQ(io::read_edge_list(in).adjacency, Mat::Zero(4, 4));
}

TEST(EdgeList, DuplicatesCollapseAndSelfLoopsWarn) {
  std::istringstream in("# a comment\n0 1\n1 0\n0 1\n2 2\n");
  const io::EdgeList g = io::read_edge_list(in, "g.txt");
  EXPECT_EQ(g.adjacency.rows(), 3);
  EXPECT_EQ(g.adjacency.sum(), 2.0);
  EXPECT_EQ(g.adjacency(2, 2), 0.0);
  ASSERT_EQ(g.warnings.size(), 1u);
  EXPECT_NE(g.warnings[0].find("g.txt:5"), std::string::npos);
}

TEST(EdgeList, Errors) {
  std::istringstream negative("0 -1\n");
  EXPECT_THROW(io::read_edge_list(negative), ParseError);
  std::istringstream too_big("# n=2\n0 5\n");
  EXPECT_THROW(io::read_edge_list(too_big), ParseError);
  std::istringstream malformed("0 1 2\n");
  EXPECT_THROW(io::read_edge_list(malformed), ParseError);
}

TEST(EdgeList, WriteReadRoundTrip) {
  std::mt19937_64 rng(4);
  const Mat a = oracle::random_graph(rng, 9, 0.3);
  std::stringstream buf;
  io::write_edge_list(buf, a);
  EXPECT_EQ(io::read_edge_list(buf).adjacency, a);
}
