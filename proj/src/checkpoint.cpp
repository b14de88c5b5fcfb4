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

#include "ordrec/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ordrec/error.hpp"

namespace ordrec {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are written in host byte order");

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const auto& h = checkpoint.header;
  const auto& x0 = checkpoint.embeddings.x0;
  if (x0.rows() != h.n_users + h.n_items || x0.cols() != h.d)
    throw ValidationError("checkpoint header does not match the embedding table");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto payload = path;
  payload.replace_extension(".bin");

  nlohmann::ordered_json j;
  j["format"] = "ordrec-checkpoint-1";
  j["n_users"] = h.n_users;
  j["n_items"] = h.n_items;
  j["d"] = h.d;
  j["L"] = h.order_count;
  j["mode"] = to_string(h.mode);
  j["tau"] = h.tau;
  j["hard"] = h.hard;
  j["hidden"] = to_string(h.hidden);
  j["cap"] = h.cap ? nlohmann::ordered_json(*h.cap) : nlohmann::ordered_json(nullptr);
  j["binary_values"] = h.binary_values;
  j["config_hash"] = h.config_hash;
  j["seed"] = h.seed;
  j["best_epoch"] = h.best_epoch;
  j["payload"] = payload.filename().string();

  std::ofstream meta(path, std::ios::trunc);
  if (!meta) throw IoError("cannot create " + path.string());
  meta << j.dump(2) << '\n';
  std::ofstream bin(payload, std::ios::binary | std::ios::trunc);
  if (!bin) throw IoError("cannot create " + payload.string());
  bin.write(reinterpret_cast<const char*>(x0.data().data()),
            static_cast<std::streamsize>(x0.data().size_bytes()));
  if (!meta || !bin) throw IoError("checkpoint write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream meta(path);
  if (!meta) throw IoError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed checkpoint header " + path.string() + ": " + e.what());
  }
  Checkpoint c;
  auto& h = c.header;
  std::string payload_name;
  try {
    h.n_users = j.at("n_users").get<std::size_t>();
    h.n_items = j.at("n_items").get<std::size_t>();
    h.d = j.at("d").get<std::size_t>();
    h.order_count = j.at("L").get<int>();
    h.mode = parse_mode(j.at("mode").get<std::string>());
    h.tau = j.at("tau").get<double>();
    h.hard = j.at("hard").get<bool>();
    h.hidden = parse_hidden_mode(j.at("hidden").get<std::string>());
    if (!j.at("cap").is_null()) h.cap = j.at("cap").get<std::size_t>();
    h.binary_values = j.at("binary_values").get<bool>();
    h.config_hash = j.at("config_hash").get<std::string>();
    h.seed = j.at("seed").get<std::uint64_t>();
    h.best_epoch = j.at("best_epoch").get<int>();
    payload_name = j.at("payload").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("incomplete checkpoint header " + path.string() + ": " + e.what());
  }

  const auto payload = path.parent_path() / payload_name;
  std::ifstream bin(payload, std::ios::binary);
  if (!bin) throw IoError("cannot open checkpoint payload " + payload.string());
  c.embeddings.x0 = DenseMatrix(h.n_users + h.n_items, h.d);
  auto data = c.embeddings.x0.data();
  bin.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
  if (!bin || bin.peek() != std::char_traits<char>::eof())
    throw ValidationError("checkpoint payload size does not match " + std::to_string(h.n_users + h.n_items) +
                          " x " + std::to_string(h.d));
  return c;
}

}  // namespace ordrec
