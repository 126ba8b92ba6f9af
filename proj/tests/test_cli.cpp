#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run xafcm(const std::string& args) {
  const std::string cmd = std::string("\"") + XAFCM_CLI_PATH + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("xafcm_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, LearnWritesWorkedExampleModel) {
  const auto x = file("x.txt", "AAABCC\n");
  const auto r = xafcm("learn -r " + x + " -k 2 -d 2 --alpha 0.01 --alphabet ABC -o " + path("m.xaf"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(slurp(path("m.xaf")),
            "xafcm 1 ABC 2 2 0.01 6\nAA\tAB\t1\nAA\tBC\t1\nAB\tCC\t1\nBC\tCA\t1\nCA\tAA\t1\nCC\tAA\t1\n");
}

TEST_F(Cli, NrcFromModelAndFromReference) {
  const auto x = file("x.txt", "AAABCC\n");
  EXPECT_EQ(xafcm("nrc -r " + x + " -t " + x + " -k 2 -d 1 --alpha 0.01 --alphabet ABC").out, "0.223707\n");
  ASSERT_EQ(xafcm("learn -r " + x + " -k 2 -d 2 --alpha 0.01 --alphabet ABC -o " + path("m.xaf")).status, 0);
  const auto r = xafcm("nrc -m " + path("m.xaf") + " -t " + x);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.133451\n");
}

TEST_F(Cli, ProfileTsv) {
  const auto x = file("x.txt", "AAABCC");
  const auto r = xafcm("profile -r " + x + " -t " + x + " -k 2 -d 2 --alpha 0.01 --alphabet ABC");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "position\tbits_per_symbol\n0\t0.054986\n2\t0.524574\n4\t0.054986\n");
}

TEST_F(Cli, FailuresLeaveNoOutput) {
  const auto x = file("x.txt", "ACGT");
  auto r = xafcm("learn -r " + path("missing.txt") + " -k 2 -o " + path("m.xaf"));
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(fs::exists(path("m.xaf")));
  EXPECT_FALSE(fs::exists(path("m.xaf.tmp")));

  const auto bad = file("bad.txt", "ACGN");
  r = xafcm("learn -r " + bad + " -k 2 -o " + path("m.xaf"));
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(fs::exists(path("m.xaf")));

  EXPECT_EQ(xafcm("learn -r " + x + " -o " + path("m.xaf")).status, 1);  // -k missing
  EXPECT_EQ(xafcm("frobnicate").status, 1);
  EXPECT_EQ(xafcm("learn -r " + x + " -k 2 -d 16 -o " + path("m.xaf")).status, 2);  // 4^16 too large
}

TEST_F(Cli, AlphabetMismatchIsAnError) {
  const auto dna = file("dna.txt", "ACGTACGTAC");
  ASSERT_EQ(xafcm("learn -r " + dna + " -k 2 -o " + path("m.xaf")).status, 0);
  const auto abc = file("abc.txt", "abcabc");
  EXPECT_EQ(xafcm("nrc -m " + path("m.xaf") + " -t " + abc).status, 2);
}

TEST_F(Cli, AutoAlphaInHeaderAndIdempotentOutput) {
  const auto x = file("x.fa", ">seq1\nACGTTGCA\nacgtac\n>seq2\nGGGTTT\n");
  ASSERT_EQ(xafcm("learn -r " + x + " -k 3 -d 2 --alpha auto -o " + path("a.xaf")).status, 0);
  ASSERT_EQ(xafcm("learn -r " + x + " -k 3 -d 2 --alpha auto -o " + path("b.xaf")).status, 0);
  const auto text = slurp(path("a.xaf"));
  EXPECT_EQ(text, slurp(path("b.xaf")));
  const auto alpha = xafcm("alpha -a 4 -d 2").out;
  ASSERT_FALSE(alpha.empty());
  EXPECT_EQ(text.substr(0, text.find('\n')).rfind("xafcm 1 ACGT 3 2 ", 0), 0u);
  EXPECT_NEAR(std::stod(text.substr(17)), std::stod(alpha), 1e-12);
}

TEST_F(Cli, AlphaCommand) {
  EXPECT_NEAR(std::stod(xafcm("alpha -a 6 -d 1").out), 0.0227273, 1e-6);
  EXPECT_NEAR(std::stod(xafcm("alpha -a 6 -d 2").out), 0.0067472, 1e-6);
}

TEST_F(Cli, MatrixDiagonalIsSmallest) {
  std::string args;
  for (int i = 0; i < 3; ++i) {
    const auto p = path("s" + std::to_string(i) + ".txt");
    ASSERT_EQ(xafcm("synth --length 3000 --seed " + std::to_string(i + 1) + " -o " + p).status, 0);
    args += " --ref s" + std::to_string(i) + "=" + p;
  }
  const auto r = xafcm("matrix" + args + " -k 6 -d 2 --cache-dir " + path("cache") + " --journal " +
                       path("j.txt") + " -o " + path("m.csv"));
  ASSERT_EQ(r.status, 0);
  std::istringstream csv(slurp(path("m.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "reference,s0,s1,s2");
  for (int i = 0; i < 3; ++i) {
    ASSERT_TRUE(std::getline(csv, line));
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    EXPECT_EQ(cell, "s" + std::to_string(i));
    double v[3];
    for (double& x : v) {
      std::getline(row, cell, ',');
      x = std::stod(cell);
    }
    for (int j = 0; j < 3; ++j) {
      if (j != i) EXPECT_LT(v[i], v[j]);
    }
  }
  // A rerun resumes from the journal and produces the same file.
  const auto first = slurp(path("m.csv"));
  ASSERT_EQ(xafcm("matrix" + args + " -k 6 -d 2 --cache-dir " + path("cache") + " --journal " + path("j.txt") +
                  " -o " + path("m2.csv"))
                .status,
            0);
  EXPECT_EQ(slurp(path("m2.csv")), first);
}

TEST_F(Cli, QuantizeTwoPeaks) {
  std::string signal;
  for (int i = 0; i < 300; ++i) signal += std::to_string(i % 100) + "\n";
  const auto s = file("signal.txt", signal);
  const auto p = file("peaks.txt", "0\n250\n");
  const auto r = xafcm("quantize --signal " + s + " --peaks " + p + " --symbols-per-segment 20");
  ASSERT_EQ(r.status, 0);
  ASSERT_EQ(r.out.size(), 21u);
  for (char c : r.out.substr(0, 20)) EXPECT_TRUE(c >= 'a' && c <= 'f');

  const auto csv = file("signal.csv", "time,ecg\n0,1\n1,2\n2,3\n3,4\n");
  const auto p2 = file("p2.txt", "0\n4\n");
  EXPECT_EQ(xafcm("quantize --signal " + csv + " --column 1 --peaks " + p2 + " --symbols-per-segment 4").out,
            "abef\n");
  EXPECT_EQ(xafcm("quantize --signal " + s + " --peaks " + file("one.txt", "5\n")).status, 2);
}

TEST_F(Cli, ClassifySyntheticClasses) {
  std::string args;
  for (int c = 0; c < 3; ++c) {
    const auto cs = std::to_string(c);
    const auto train = path("train" + cs + ".txt");
    const auto test = path("test" + cs + ".txt");
    const std::string src = " --kind markov --alphabet sax6 --order 2 --concentration 0.5 --source-seed " +
                            std::to_string(100 + c);
    ASSERT_EQ(xafcm("synth" + src + " --length 10000 --seed 1 -o " + train).status, 0);
    ASSERT_EQ(xafcm("synth" + src + " --length 5000 --seed 2 -o " + test).status, 0);
    args += " --train c" + cs + "=" + train + " --test c" + cs + "=" + test;
  }
  const auto r = xafcm("classify" + args + " --alphabet sax6 -k 4 -d 2 --segment-len 1000 --confusion " +
                       path("conf.csv"));
  ASSERT_EQ(r.status, 0);
  std::istringstream report(r.out);
  std::string line;
  std::getline(report, line);
  EXPECT_EQ(line, "segment_id,true_label,predicted_label,nrc_c0,nrc_c1,nrc_c2");
  int rows = 0, correct = 0;
  while (std::getline(report, line)) {
    std::istringstream row(line);
    std::string id, truth, pred;
    std::getline(row, id, ',');
    std::getline(row, truth, ',');
    std::getline(row, pred, ',');
    EXPECT_EQ(std::stoi(id), rows);
    correct += truth == pred;
    ++rows;
  }
  EXPECT_EQ(rows, 15);
  EXPECT_EQ(correct, 15);
  EXPECT_EQ(slurp(path("conf.csv")), "true\\predicted,c0,c1,c2\nc0,5,0,0\nc1,0,5,0\nc2,0,0,5\n");
}
