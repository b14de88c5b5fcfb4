// Copyright 2026 The ordrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "ordrec/checkpoint.hpp"
#include "ordrec/error.hpp"

using namespace ordrec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ordrec_ckpt_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Checkpoint sample() {
  Checkpoint c;
  c.header.n_users = 3;
  c.header.n_items = 4;
  c.header.d = 5;
  c.header.order_count = 3;
  c.header.mode = Mode::no_denoise;
  c.header.tau = 0.25;
  c.header.hard = true;
  c.header.hidden = HiddenMode::shared;
  c.header.cap = 17;
  c.header.binary_values = true;
  c.header.config_hash = "0123456789abcdef";
  c.header.seed = 42;
  c.header.best_epoch = 9;
  c.embeddings.x0 = oracle::random_dense(7, 5, 3);
  return c;
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto dir = scratch("roundtrip");
  const auto c = sample();
  save_checkpoint(c, dir / "checkpoint.json");
  EXPECT_TRUE(fs::exists(dir / "checkpoint.bin"));
  EXPECT_EQ(fs::file_size(dir / "checkpoint.bin"), 7u * 5u * 8u);
  const auto r = load_checkpoint(dir / "checkpoint.json");
  EXPECT_EQ(r.embeddings.x0, c.embeddings.x0);
  EXPECT_EQ(r.header.n_users, 3u);
  EXPECT_EQ(r.header.mode, Mode::no_denoise);
  EXPECT_EQ(r.header.tau, 0.25);
  EXPECT_TRUE(r.header.hard);
  EXPECT_EQ(r.header.hidden, HiddenMode::shared);
  EXPECT_EQ(r.header.cap, std::optional<std::size_t>(17));
  EXPECT_EQ(r.header.config_hash, "0123456789abcdef");
  EXPECT_EQ(r.header.best_epoch, 9);

  auto uncapped = c;
  uncapped.header.cap.reset();
  save_checkpoint(uncapped, dir / "other.json");
  EXPECT_FALSE(load_checkpoint(dir / "other.json").header.cap.has_value());
}

TEST(Checkpoint, RejectsMismatchedPayloadAndHeader) {
  const auto dir = scratch("mismatch");
  auto c = sample();
  save_checkpoint(c, dir / "checkpoint.json");
  {
    std::ofstream bin(dir / "checkpoint.bin", std::ios::binary | std::ios::app);
    bin.put('x');
  }
  EXPECT_THROW(load_checkpoint(dir / "checkpoint.json"), ValidationError);
  fs::resize_file(dir / "checkpoint.bin", 7u * 5u * 8u - 8u);
  EXPECT_THROW(load_checkpoint(dir / "checkpoint.json"), ValidationError);

  c.header.d = 4;
  EXPECT_THROW(save_checkpoint(c, dir / "bad.json"), ValidationError);
}

TEST(Checkpoint, MissingOrMalformedFiles) {
  const auto dir = scratch("missing");
  EXPECT_THROW(load_checkpoint(dir / "nope.json"), IoError);
  {
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  EXPECT_THROW(load_checkpoint(dir / "broken.json"), ValidationError);
  {
    std::ofstream(dir / "partial.json") << R"({"n_users": 1})";
  }
  EXPECT_THROW(load_checkpoint(dir / "partial.json"), ValidationError);
  save_checkpoint(sample(), dir / "checkpoint.json");
  fs::remove(dir / "checkpoint.bin");
  EXPECT_THROW(load_checkpoint(dir / "checkpoint.json"), IoError);
}

}  // namespace
