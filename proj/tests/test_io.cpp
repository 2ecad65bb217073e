#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "rsa/io/config.hpp"
#include "rsa/io/idx.hpp"
#include "rsa/io/results.hpp"
#include "rsa/io/splits.hpp"

using namespace rsa;
using namespace rsa::io;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rsa_test_io";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

// 2 images of 2x2 pixels, written byte by byte in big-endian order.
std::vector<std::uint8_t> tiny_images() {
  return {0x00, 0x00, 0x08, 0x03,  // magic
          0x00, 0x00, 0x00, 0x02,  // count
          0x00, 0x00, 0x00, 0x02,  // rows
          0x00, 0x00, 0x00, 0x02,  // cols
          0, 255, 51, 102, 255, 0, 0, 0};
}

std::vector<std::uint8_t> tiny_labels() { return {0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x02, 7, 3}; }

// Balanced dataset: `per_class` samples of each of 10 classes, 2 features.
ClassifierDataset balanced(std::size_t per_class) {
  std::vector<float> x;
  std::vector<int> t;
  for (std::size_t s = 0; s < per_class * 10; ++s) {
    t.push_back(static_cast<int>(s % 10));
    x.push_back(static_cast<float>(s % 10) / 10.0f);
    x.push_back(0.5f);
  }
  return ClassifierDataset(2, 10, std::move(x), std::move(t));
}

ResultRecord sample_record(int k) {
  ResultRecord r;
  r.run_id = "sweep-gamma-abc-" + std::to_string(k);
  r.config_hash = "00112233aabbccdd";
  r.seed = 1234567890123ull + k;
  r.command = "sweep-gamma";
  r.point = k;
  r.repetition = 2;
  r.gamma = 0.123456789;
  r.beta_i = 100;
  r.beta_f = 1e5;
  r.replicas = 3;
  r.iterations = 50000;
  r.active_transitions = 27293;
  r.best_replica = 1;
  r.train_loss = {1.3212345, 0.4, 2.0 / 3.0};
  r.train_accuracy = {0.8814, 0.9, 0.1};
  r.test_loss = {1.5, 1.25, 1.0};
  r.test_accuracy = {0.85, 0.86, 0.87};
  r.wall_seconds = 6.43219;
  r.timestamp = "2026-01-01T00:00:00Z";
  r.trajectory = {{0, 10.5, {0.1, 0.2, 0.3}}, {100, 9.25, {0.4, 0.5, 0.6}}};
  return r;
}

}  // namespace

TEST(Idx, HeaderKinds) {
  const auto img = parse_idx(tiny_images());
  EXPECT_TRUE(img.is_images());
  EXPECT_EQ(img.dims, (std::vector<std::uint32_t>{2, 2, 2}));
  EXPECT_EQ(img.item_size(), 4u);
  const auto lab = parse_idx(tiny_labels());
  EXPECT_TRUE(lab.is_labels());
  EXPECT_EQ(lab.dims.size(), 1u);
  EXPECT_EQ(lab.payload, (std::vector<std::uint8_t>{7, 3}));
}

TEST(Idx, BigEndianFixtureDecodes) {
  const auto ds = to_dataset(parse_idx(tiny_images()), parse_idx(tiny_labels()));
  EXPECT_EQ(ds.n, 2u);
  EXPECT_EQ(ds.d, 4u);
  EXPECT_EQ(ds.targets, (std::vector<int>{7, 3}));
  EXPECT_FLOAT_EQ(ds.features[1], 1.0f);
  EXPECT_FLOAT_EQ(ds.features[2], 0.2f);
  EXPECT_FLOAT_EQ(ds.features[3], 0.4f);
  EXPECT_FLOAT_EQ(ds.features[4], 1.0f);
}

TEST(Idx, SerializeRoundTrip) {
  const auto f = parse_idx(tiny_images());
  EXPECT_EQ(serialize_idx(f), tiny_images());
  const auto path = scratch("images.idx");
  {
    const auto bytes = serialize_idx(f);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  EXPECT_EQ(read_idx(path).payload, f.payload);
}

TEST(Idx, TruncatedPayloadNamesByteCounts) {
  auto bytes = tiny_images();
  bytes.resize(bytes.size() - 3);
  try {
    (void)parse_idx(bytes, "cut.idx");
    FAIL() << "expected IdxTruncatedError";
  } catch (const IdxTruncatedError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cut.idx"), std::string::npos);
    EXPECT_NE(msg.find("expected 8 bytes"), std::string::npos) << msg;
    EXPECT_NE(msg.find("got 5"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_idx({0x00, 0x00}), IdxTruncatedError);
  EXPECT_THROW(parse_idx({0x00, 0x00, 0x08, 0x03, 0x00}), IdxTruncatedError);
}

TEST(Idx, DistinctErrorsPerFailure) {
  EXPECT_THROW(parse_idx({0x00, 0x00, 0x08, 0x02, 0, 0, 0, 0}), IdxMagicError);
  auto labels = tiny_labels();
  labels[7] = 3;
  labels.push_back(1);
  EXPECT_THROW(to_dataset(parse_idx(tiny_images()), parse_idx(labels)), IdxCountMismatchError);
  EXPECT_THROW(to_dataset(parse_idx(tiny_labels()), parse_idx(tiny_labels())), IdxMagicError);
}

TEST(Idx, MissingDatasetIsActionable) {
  const auto dir = std::filesystem::temp_directory_path() / "rsa_no_mnist_here";
  std::filesystem::create_directories(dir);
  try {
    (void)load_mnist(dir);
    FAIL() << "expected DatasetMissingError";
  } catch (const DatasetMissingError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("RSA_DATA_DIR"), std::string::npos);
    EXPECT_NE(msg.find("t10k-labels-idx1-ubyte"), std::string::npos);
  }
}

TEST(Splits, PerClassCountsAndDisjointness) {
  const auto data = balanced(7000);
  const auto idx = split_indices(data, 6000, 1000, 3);
  EXPECT_EQ(idx.train.size(), 60000u);
  EXPECT_EQ(idx.test.size(), 10000u);
  std::set<std::size_t> train(idx.train.begin(), idx.train.end());
  EXPECT_EQ(train.size(), idx.train.size());
  for (std::size_t s : idx.test) EXPECT_EQ(train.count(s), 0u);
  const auto split = make_splits(data, 6000, 1000, 3);
  std::vector<int> per_class(10, 0);
  for (int t : split.test.targets) ++per_class[static_cast<std::size_t>(t)];
  for (int c : per_class) EXPECT_EQ(c, 1000);
  EXPECT_EQ(split_indices(data, 6000, 1000, 3).train, idx.train);
  EXPECT_NE(split_indices(data, 6000, 1000, 4).train, idx.train);
}

TEST(Splits, ShortClassIsAnError) {
  EXPECT_THROW(split_indices(balanced(100), 90, 20, 0), InsufficientSamplesError);
}

TEST(Splits, SubsampleIsExactAndDeterministic) {
  const auto data = balanced(2000);
  const auto a = subsample(data, 10000, 5);
  const auto b = subsample(data, 10000, 5);
  EXPECT_EQ(a.n, 10000u);
  EXPECT_EQ(a.targets, b.targets);
  EXPECT_EQ(a.features, b.features);
  const auto idx = subsample_indices(20000, 10000, 5);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 10000u);
  EXPECT_NE(subsample_indices(20000, 10000, 6), idx);
  EXPECT_THROW(subsample_indices(10, 11, 0), InsufficientSamplesError);
}

TEST(Config, ParsesAndHashesCanonically) {
  const auto a = Json::parse(R"({"schema_version":1,"seed":3,"replicas":2,
      "dataset":{"kind":"synthetic","synthetic_count":10},"model":{"kind":"perceptron","tie_rule":"lenient"},
      "schedule":{"beta_i":0.1,"beta_f":10,"iterations":100}})");
  const auto b = Json::parse(R"({"schedule":{"iterations":100,"beta_f":10,"beta_i":0.1},
      "model":{"tie_rule":"lenient","kind":"perceptron"},"dataset":{"synthetic_count":10,"kind":"synthetic"},
      "replicas":2,"seed":3,"schema_version":1,"output":"elsewhere.csv"})");
  const auto ca = config_from_json(a);
  const auto cb = config_from_json(b);
  EXPECT_EQ(config_hash(ca), config_hash(cb));
  EXPECT_EQ(ca.model.tie_rule, TieRule::lenient);
  EXPECT_EQ(ca.schedule.build().total_iterations(), 100u);
  auto c = ca;
  c.seed = 4;
  EXPECT_NE(config_hash(c), config_hash(ca));
  EXPECT_EQ(config_hash(config_from_json(to_json(ca))), config_hash(ca));
  EXPECT_EQ(config_hash(ca).size(), 16u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json(Json::parse(R"({"seed":1})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":2})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"sede":1})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"schedule":{"beta":1}})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"kernel":"gibbs"})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"schedule":{"beta_i":10,"beta_f":1}})")),
               ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"dataset":{"kind":"synthetic"}})")),
               ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"robustness":{"p":[1.5]}})")), ConfigError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"schema_version":1,"replicas":"three"})")), ConfigError);
}

TEST(Results, CsvRoundTrip) {
  const auto path = scratch("results.csv");
  const std::vector<ResultRecord> recs = {sample_record(0), sample_record(1)};
  write_results(recs, path, "csv");
  write_results(std::vector<ResultRecord>{sample_record(2)}, path, "csv");
  const auto back = read_results<ResultRecord>(path, "csv");
  ASSERT_EQ(back.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_TRUE(back[k].same_result(csv_view(sample_record(k)))) << k;
    EXPECT_EQ(back[k].timestamp, "2026-01-01T00:00:00Z");
  }
  // one header despite the append
  std::ifstream in(path);
  std::string line;
  int headers = 0;
  while (std::getline(in, line)) headers += line == kResultCsvHeader ? 1 : 0;
  EXPECT_EQ(headers, 1);
}

TEST(Results, CsvHasFixedColumns) {
  const std::string row = to_csv_row(sample_record(0));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 22);
  const std::string header = kResultCsvHeader;
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 22);
  EXPECT_NE(row.find("0.123457"), std::string::npos);
  EXPECT_NE(row.find("1.32123;0.4;0.666667"), std::string::npos);
}

TEST(Results, JsonLinesRoundTripKeepsEverything) {
  const auto path = scratch("results.jsonl");
  write_results(std::vector<ResultRecord>{sample_record(0), sample_record(5)}, path, "jsonl");
  const auto back = read_results<ResultRecord>(path, "jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_TRUE(back[0].same_result(sample_record(0)));
  EXPECT_TRUE(back[1].same_result(sample_record(5)));
  EXPECT_EQ(back[1].trajectory.size(), 2u);
}

TEST(Results, CurveRoundTrip) {
  CurveRecord c;
  c.run_id = "robustness-x-0";
  c.config_hash = "ffff";
  c.seed = 9;
  c.gamma = 0.8;
  c.p = 0.001;
  c.flips = 1;
  c.repetitions = 1000;
  c.mean_accuracy = 0.9598765;
  c.ci_half_width = 0.00123456;
  c.timestamp = "t";
  for (const char* fmt : {"csv", "jsonl"}) {
    const auto path = scratch(std::string("curve.") + fmt);
    write_results(std::vector<CurveRecord>{c, c}, path, fmt);
    const auto back = read_results<CurveRecord>(path, fmt);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_TRUE(back[0].same_result(std::string(fmt) == "csv" ? csv_view(c) : c));
  }
}

TEST(Results, EmptyListWritesHeaderOnly) {
  const auto path = scratch("empty.csv");
  write_results(std::vector<ResultRecord>{}, path, "csv");
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(all, std::string(kResultCsvHeader) + "\n");
  EXPECT_TRUE(read_results<ResultRecord>(path, "csv").empty());
  EXPECT_THROW(write_results(std::vector<ResultRecord>{}, path, "xml"), std::invalid_argument);
}
