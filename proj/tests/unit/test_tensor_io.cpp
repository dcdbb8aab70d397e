#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "longdiff/config.hpp"
#include "longdiff/error.hpp"
#include "longdiff/random.hpp"
#include "longdiff/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace longdiff;

namespace {

fs::path temp_file(const std::string& name) {
    auto dir = fs::temp_directory_path() / "longdiff_tensor_io";
    fs::create_directories(dir);
    return dir / name;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected longdiff::Error";
    return ErrorCode::Io;
}

}  // namespace

TEST(TensorIo, ZeroMatrixFileSize) {
    const auto path = temp_file("zeros.ldt");
    write_tensor(Tensor({2, 2}, {0, 0, 0, 0}), path);
    EXPECT_EQ(fs::file_size(path), 56u);

    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "LDT1");
}

TEST(TensorIo, HeaderLayoutIsLittleEndian) {
    const auto bytes = encode_tensor(Tensor({3}, {1.0, 2.0, 3.0}));
    ASSERT_EQ(bytes.size(), 4u + 4u + 8u + 24u);
    EXPECT_EQ(bytes[4], 1);  // ndim
    EXPECT_EQ(bytes[5], 0);
    EXPECT_EQ(bytes[8], 3);  // dims[0]
    // 1.0 = 0x3FF0000000000000, low byte first
    EXPECT_EQ(bytes[16], 0x00);
    EXPECT_EQ(bytes[22], 0xF0);
    EXPECT_EQ(bytes[23], 0x3F);
}

TEST(TensorIo, SingleValueRoundTripsBitwise) {
    const auto path = temp_file("one.ldt");
    const Tensor t({1}, {1.5});
    write_tensor(t, path);
    EXPECT_TRUE(bitwise_equal(read_tensor(path), t));
}

TEST(TensorIo, RandomTensorsRoundTripBitwise) {
    std::mt19937_64 gen(42);
    std::uniform_int_distribution<std::size_t> rank_dist(0, 4);
    std::uniform_int_distribution<std::size_t> extent(0, 5);
    std::normal_distribution<double> value(0.0, 1e3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> dims(rank_dist(gen));
        for (auto& d : dims) d = extent(gen);
        Tensor t(dims);
        for (auto& x : t.data) x = value(gen);
        if (!t.data.empty()) t.data[0] = -0.0;
        const auto back = decode_tensor(encode_tensor(t));
        EXPECT_TRUE(bitwise_equal(back, t)) << "trial " << trial;
    }
}

TEST(TensorIo, ExtentMismatchRejected) {
    EXPECT_EQ(code_of([] { Tensor({3, 2}, std::vector<double>(7, 0.0)); }),
              ErrorCode::ShapeMismatch);
}

TEST(TensorIo, NonFiniteRejectedOnWriteAndRead) {
    Tensor t({2});
    t.data = {1.0, std::numeric_limits<double>::quiet_NaN()};
    EXPECT_EQ(code_of([&] { encode_tensor(t); }), ErrorCode::NonFinite);

    auto bytes = encode_tensor(Tensor({2}, {1.0, 2.0}));
    const auto nan_bits = std::bit_cast<std::uint64_t>(std::numeric_limits<double>::quiet_NaN());
    for (int b = 0; b < 8; ++b) bytes[24 + b] = static_cast<std::uint8_t>(nan_bits >> (8 * b));
    EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::NonFinite);
}

TEST(TensorIo, BadMagicRejected) {
    auto bytes = encode_tensor(Tensor({1}, {1.0}));
    bytes[0] = 'X';
    bytes[1] = 'X';
    bytes[2] = 'X';
    bytes[3] = 'X';
    EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::BadMagic);
}

TEST(TensorIo, TruncatedPayloadRejected) {
    auto bytes = encode_tensor(Tensor({2, 2}, {1, 2, 3, 4}));
    bytes.resize(bytes.size() - 1);
    EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::Truncated);
    bytes.resize(10);  // inside dims
    EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::Truncated);
}

TEST(TensorIo, TrailingBytesRejected) {
    auto bytes = encode_tensor(Tensor({1}, {1.0}));
    bytes.push_back(0);
    EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::CorruptFile);
}

TEST(TensorIo, MissingFileIsIoError) {
    EXPECT_EQ(code_of([] { read_tensor("/nonexistent/dir/x.ldt"); }), ErrorCode::Io);
}

TEST(SynthFeatures, DeterministicAndShaped) {
    const auto a = synth_features(16, 4, 64, 123);
    const auto b = synth_features(16, 4, 64, 123);
    EXPECT_EQ(a.dims, (std::vector<std::size_t>{16, 4, 64}));
    EXPECT_TRUE(bitwise_equal(a, b));
}

TEST(SynthFeatures, SeedsDiffer) {
    const auto a = synth_features(4, 2, 8, 1);
    const auto b = synth_features(4, 2, 8, 2);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differing += a.data[i] != b.data[i];
    EXPECT_GT(differing, 0u);
}

TEST(SynthFeatures, ZeroExtentRejected) {
    EXPECT_THROW(synth_features(0, 1, 1, 0), Error);
    EXPECT_THROW(synth_features(1, 0, 1, 0), Error);
    EXPECT_THROW(synth_features(1, 1, 0, 0), Error);
}

TEST(CounterRng, MatchesDocumentedAlgorithm) {
    // Draw 0 of seed 0 is the SplitMix64 output for state 0x9E3779B97F4A7C15.
    EXPECT_EQ(CounterRng(0).bits(0), 0xE220A8397B1DCDAFULL);
    const CounterRng rng(99);
    const double u1 = rng.uniform(4);
    const double u2 = rng.uniform(5);
    const double r = std::sqrt(-2.0 * std::log(u1));
    EXPECT_EQ(rng.normal(4), r * std::cos(2.0 * M_PI * u2));
    EXPECT_EQ(rng.normal(5), r * std::sin(2.0 * M_PI * u2));
}

TEST(CounterRng, NormalMomentsAreSane) {
    const auto t = synth_features(64, 8, 64, 7);
    double mean = 0.0, sq = 0.0;
    for (double x : t.data) {
        mean += x;
        sq += x * x;
    }
    mean /= static_cast<double>(t.size());
    sq /= static_cast<double>(t.size());
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(sq, 1.0, 0.05);
}

TEST(RunConfigJson, RoundTripsWithExactFieldNames) {
    RunConfig cfg;
    cfg.seed = 0xFFFFFFFFFFFFFFF0ULL;
    const json j = to_json(cfg);
    std::vector<std::string> keys;
    for (const auto& [k, _] : j.items()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(keys, (std::vector<std::string>{"G", "L", "N", "alpha", "n", "replace_fraction",
                                              "rpe", "seed"}));
    EXPECT_EQ(run_config_from_json(j), cfg);

    RunConfig bias_cfg;
    bias_cfg.rpe = synthetic_additive_bias(8, 4);
    EXPECT_EQ(run_config_from_json(json::parse(to_json(bias_cfg).dump())), bias_cfg);
}

TEST(RunConfigJson, InvariantViolationsRejected) {
    auto bad = [](auto mutate) {
        json j = to_json(RunConfig{});
        mutate(j);
        EXPECT_THROW(run_config_from_json(j), Error) << j.dump();
    };
    bad([](json& j) { j["G"] = 1; });
    bad([](json& j) { j["G"] = 200; });
    bad([](json& j) { j["L"] = 128; });
    bad([](json& j) { j["n"] = 129; });
    bad([](json& j) { j["alpha"] = -1.0; });
    bad([](json& j) { j["replace_fraction"] = 1.5; });
    bad([](json& j) { j["extra"] = 1; });
    bad([](json& j) { j.erase("seed"); });
    bad([](json& j) { j["rpe"]["rotary_dims"] = 3; });
    bad([](json& j) { j["rpe"]["kind"] = "alibi"; });
}
