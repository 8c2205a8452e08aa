#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oracles.hpp"
#include "test_support.hpp"
#include "tmtf/io.hpp"

using namespace tmtf;
using testing::TempDir;

namespace {

FieldImage example_tmtf() {
  const std::size_t qs[] = {3};
  return multi_resolution(TimeSeries(oracle::kExample1), qs, {2, FallbackPolicy::global, ChunkPolicy::strict})
      .channels.front();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("read headerless csv") {
  TempDir dir;
  testing::write_text(dir / "a.csv", "12\n85\n45\n");
  const auto x = io::read_csv(dir / "a.csv");
  CHECK(std::vector<double>(x.values().begin(), x.values().end()) == std::vector<double>{12, 85, 45});

  testing::write_text(dir / "crlf.csv", "1.5\r\n-2e3\r\n\r\n+4\r\n");
  const auto y = io::read_csv(dir / "crlf.csv");
  CHECK(std::vector<double>(y.values().begin(), y.values().end()) == std::vector<double>{1.5, -2000, 4});
}

TEST_CASE("read headered csv by column") {
  TempDir dir;
  testing::write_text(dir / "b.csv", "t,value\n1,10\n2,20\n3,30\n");
  const auto x = io::read_csv(dir / "b.csv", "value");
  CHECK(std::vector<double>(x.values().begin(), x.values().end()) == std::vector<double>{10, 20, 30});
  const auto t = io::read_csv(dir / "b.csv", "0");
  CHECK(t[2] == 3);
  CHECK(code_of([&] { io::read_csv(dir / "b.csv", "price"); }) == ErrorCode::invalid_params);
}

TEST_CASE("csv errors name the row") {
  TempDir dir;
  testing::write_text(dir / "nan.csv", "1\n2\nNaN\n4\n");
  try {
    io::read_csv(dir / "nan.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  testing::write_text(dir / "word.csv", "v\n1\nabc\n");
  try {
    io::read_csv(dir / "word.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  testing::write_text(dir / "inf.csv", "1\ninf\n");
  CHECK(code_of([&] { io::read_csv(dir / "inf.csv"); }) == ErrorCode::invalid_input);
  CHECK(code_of([&] { io::read_csv(dir / "missing.csv"); }) == ErrorCode::io_error);
}

TEST_CASE("npy header layout") {
  const auto img = example_tmtf();
  const auto bytes = io::npy_bytes(img);
  CHECK(bytes.compare(0, 8, std::string("\x93NUMPY\x01\x00", 8)) == 0);
  const std::size_t hlen = static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
  CHECK((10 + hlen) % 64 == 0);
  const std::string header = bytes.substr(10, hlen);
  CHECK(header.rfind("{'descr': '<f8', 'fortran_order': False, 'shape': (12, 12), }", 0) == 0);
  CHECK(header.back() == '\n');
  CHECK(bytes.size() == 10 + hlen + 144 * 8);

  // 1.0 little-endian: 00 00 00 00 00 00 f0 3f ; entry (0,1) of the example is 1
  CHECK(bytes.substr(10 + hlen + 8, 8) == std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));

  ChannelStack stack{{img, img, img}, {3, 3, 3}, 2};
  const auto sbytes = io::npy_bytes(stack);
  CHECK(sbytes.find("'shape': (3, 12, 12), }") != std::string::npos);
}

TEST_CASE("npy round trip is bitwise") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t T = 3 + rng() % 40;
    FieldImage img{T, FieldKind::tmtf, 3, 1, std::vector<double>(T * T)};
    for (auto& v : img.entries) v = u(rng);
    img.entries[0] = std::nextafter(1.0, 0.0);
    io::write_npy(img, dir / "a.npy");
    const auto arr = io::read_npy(dir / "a.npy");
    CHECK(arr.shape == std::vector<std::size_t>{T, T});
    CHECK(oracle::bitwise_equal(arr.data, img.entries));

    ChannelStack stack{{img, img}, {3, 3}, 1};
    io::write_npy(stack, dir / "s.npy");
    const auto sarr = io::read_npy(dir / "s.npy");
    CHECK(sarr.shape == std::vector<std::size_t>{2, T, T});
    CHECK(sarr.data.size() == 2 * T * T);
  }
}

TEST_CASE("npy payload equals the file body") {
  const auto img = example_tmtf();
  ChannelStack stack{{img}, {3}, 2};
  const auto bytes = io::npy_bytes(stack);
  const auto payload = io::npy_payload(stack.channels);
  CHECK(bytes.substr(bytes.size() - payload.size()) == payload);
}

TEST_CASE("pgm rendering") {
  CHECK(io::to_gray(1.0) == 255);
  CHECK(io::to_gray(0.0) == 0);
  CHECK(io::to_gray(0.5) == 128);
  CHECK(io::to_gray(2.0 / 3.0) == 170);

  const auto img = example_tmtf();
  const auto bytes = io::pgm_bytes(img);
  const std::string head = "P5\n12 12\n255\n";
  REQUIRE(bytes.rfind(head, 0) == 0);
  REQUIRE(bytes.size() == head.size() + 144);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      const auto px = static_cast<unsigned char>(bytes[head.size() + i * 12 + j]);
      if (i < 6)
        CHECK((px == 0 || px == 255));
      else
        CHECK((px == 0 || px == 128 || px == 255));
    }
  CHECK(io::pgm_bytes(img) == bytes);

  TempDir dir;
  io::write_pgm(img, dir / "a.pgm");
  CHECK(testing::read_bytes(dir / "a.pgm") == bytes);
}

TEST_CASE("image csv uses round-trippable decimals") {
  FieldImage img{2, FieldKind::global_mtf, 2, 1, {0.5, 1.0 / 3.0, 0.0, 1.0}};
  CHECK(io::image_csv(img) == "0.5,0.33333333333333331\n0,1\n");
}
