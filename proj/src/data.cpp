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

#include "ordrec/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ordrec/error.hpp"
#include "ordrec/rng.hpp"

namespace ordrec {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t pair_key(const Interaction& p, std::size_t n_items) {
  return static_cast<std::uint64_t>(p.user) * n_items + static_cast<std::uint64_t>(p.item);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

InteractionSet with_pairs(const InteractionSet& shape, std::vector<Interaction> pairs) {
  InteractionSet s;
  s.n_users = shape.n_users;
  s.n_items = shape.n_items;
  s.user_ids = shape.user_ids;
  s.item_ids = shape.item_ids;
  s.pairs = std::move(pairs);
  return s;
}

std::string pairs_to_tsv(const InteractionSet& s) {
  std::string out;
  for (const auto& p : s.pairs) {
    out += s.user_ids.id(p.user);
    out += '\t';
    out += s.item_ids.id(p.item);
    out += '\n';
  }
  return out;
}

std::string ids_to_tsv(const IdMap& map) {
  std::string out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += map.id(static_cast<std::int32_t>(i));
    out += '\n';
  }
  return out;
}

IdMap read_ids(const std::filesystem::path& path) {
  IdMap map;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected index<TAB>id in " + path.string(), line_no);
    const std::string id(trim(std::string_view(line).substr(tab + 1)));
    if (map.intern(id) != static_cast<std::int32_t>(line_no - 1))
      throw ParseError("ID table not dense or has duplicates in " + path.string(), line_no);
  }
  return map;
}

std::vector<Interaction> read_mapped_pairs(const std::filesystem::path& path, const IdMap& users,
                                           const IdMap& items) {
  const std::string text = read_file(path);
  std::vector<Interaction> pairs;
  if (trim(text).empty()) return pairs;
  const InteractionSet raw = parse_interactions(text);
  pairs.reserve(raw.pairs.size());
  for (const auto& p : raw.pairs) {
    const std::string& u = raw.user_ids.id(p.user);
    const std::string& i = raw.item_ids.id(p.item);
    if (!users.contains(u) || !items.contains(i))
      throw ValidationError("unknown ID in " + path.string());
    pairs.push_back({users.at(u), items.at(i)});
  }
  return pairs;
}

}  // namespace

std::int32_t IdMap::intern(const std::string& id) {
  auto [it, inserted] = index_.try_emplace(id, static_cast<std::int32_t>(ids_.size()));
  if (inserted) ids_.push_back(id);
  return it->second;
}

std::int32_t IdMap::at(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown ID '" + id + "'");
  return it->second;
}

std::vector<std::vector<ItemIndex>> InteractionSet::items_by_user() const {
  std::vector<std::vector<ItemIndex>> lists(n_users);
  for (const auto& p : pairs) lists[static_cast<std::size_t>(p.user)].push_back(p.item);
  for (auto& l : lists) std::sort(l.begin(), l.end());
  return lists;
}

std::string InteractionSet::check_invariants() const {
  std::unordered_set<std::uint64_t> seen;
  for (const auto& p : pairs) {
    if (p.user < 0 || static_cast<std::size_t>(p.user) >= n_users) return "user index out of range";
    if (p.item < 0 || static_cast<std::size_t>(p.item) >= n_items) return "item index out of range";
    if (!seen.insert(pair_key(p, n_items)).second) return "duplicate pair";
  }
  if (user_ids.size() != n_users || item_ids.size() != n_items) return "ID maps do not cover the index space";
  return {};
}

InteractionSet parse_interactions(std::string_view text, LoadOptions options) {
  const char sep = options.format == InteractionFormat::csv ? ',' : '\t';
  InteractionSet set;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<std::int32_t, std::int32_t>> raw;
  bool header_pending = options.header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cut = line.find(sep);
    if (cut == std::string_view::npos)
      throw ParseError("expected at least two columns", line_no);
    const std::string_view user = trim(line.substr(0, cut));
    std::string_view rest = line.substr(cut + 1);
    const std::string_view item = trim(rest.substr(0, rest.find(sep)));
    if (user.empty() || item.empty()) throw ParseError("empty user or item column", line_no);
    const auto u = set.user_ids.intern(std::string(user));
    const auto i = set.item_ids.intern(std::string(item));
    raw.emplace_back(u, i);
  }
  if (raw.empty()) throw ValidationError("no interactions found");
  set.n_users = set.user_ids.size();
  set.n_items = set.item_ids.size();
  for (auto [u, i] : raw) {
    Interaction p{u, i};
    if (seen.insert(pair_key(p, set.n_items)).second) set.pairs.push_back(p);
  }
  return set;
}

InteractionSet load_interactions(const std::filesystem::path& path, LoadOptions options) {
  return parse_interactions(read_file(path), options);
}

SplitDataset split(const InteractionSet& data, std::array<double, 3> ratios, std::uint64_t seed) {
  if (data.pairs.empty()) throw ValidationError("cannot split an empty interaction set");
  if (data.pairs.size() < 10) throw ValidationError("need at least 10 interactions to split");
  for (double r : ratios)
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("split ratios must lie in [0, 1]");
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9)
    throw ValidationError("split ratios must sum to 1");

  std::vector<Interaction> order = data.pairs;
  SplitMix64 rng(stream_key(seed, {0x5711}));
  shuffle(std::span<Interaction>(order), rng);

  const std::size_t total = order.size();
  // Floor the held-out parts; the remainder goes to train.
  const auto part = [total](double r) {
    return static_cast<std::size_t>(std::floor(r * static_cast<double>(total) + 1e-9));
  };
  const std::size_t n_val = part(ratios[1]);
  const std::size_t n_test = part(ratios[2]);
  const std::size_t n_train = total - n_val - n_test;

  SplitDataset out;
  out.seed = seed;
  out.ratios = ratios;
  auto first = order.begin();
  out.train = with_pairs(data, {first, first + static_cast<std::ptrdiff_t>(n_train)});
  out.validation = with_pairs(data, {first + static_cast<std::ptrdiff_t>(n_train),
                                     first + static_cast<std::ptrdiff_t>(n_train + n_val)});
  out.test = with_pairs(data, {first + static_cast<std::ptrdiff_t>(n_train + n_val), order.end()});
  return out;
}

SplitDataset inject_noise(const SplitDataset& split, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 0.5)) throw ValidationError("noise ratio must lie in [0, 0.5]");
  SplitDataset out = split;
  out.noise_ratio = ratio;
  const std::size_t count =
      static_cast<std::size_t>(std::floor(ratio * static_cast<double>(split.train.pairs.size()) + 1e-9));
  if (count == 0) return out;

  const std::size_t n_users = split.train.n_users;
  const std::size_t n_items = split.train.n_items;
  std::unordered_set<std::uint64_t> taken;
  for (const auto* part : {&split.train, &split.validation, &split.test})
    for (const auto& p : part->pairs) taken.insert(pair_key(p, n_items));
  const std::uint64_t universe = static_cast<std::uint64_t>(n_users) * n_items;
  if (universe - taken.size() < count)
    throw CapacityError("not enough absent pairs to inject " + std::to_string(count) + " noise interactions");

  SplitMix64 rng(stream_key(seed, {0x2015e}));
  const std::size_t max_attempts = 1000 * count;
  std::size_t attempts = 0;
  while (out.noise_pairs.size() < count) {
    if (attempts++ >= max_attempts)
      throw CapacityError("graph too dense: gave up after " + std::to_string(max_attempts) +
                          " attempts to sample noise pairs");
    const Interaction p{static_cast<UserIndex>(rng.below(n_users)),
                        static_cast<ItemIndex>(rng.below(n_items))};
    if (!taken.insert(pair_key(p, n_items)).second) continue;
    out.noise_pairs.push_back(p);
    out.train.pairs.push_back(p);
  }
  return out;
}

NegativeSampler::NegativeSampler(const InteractionSet& train)
    : n_items_(train.n_items), items_by_user_(train.items_by_user()) {}

bool NegativeSampler::interacted(UserIndex user, ItemIndex item) const {
  const auto& items = items_by_user_[static_cast<std::size_t>(user)];
  return std::binary_search(items.begin(), items.end(), item);
}

std::vector<BprTriple> NegativeSampler::sample(std::span<const Interaction> batch,
                                               std::uint64_t seed) const {
  std::vector<BprTriple> triples;
  triples.reserve(batch.size());
  SplitMix64 rng(stream_key(seed, {0x0e6}));
  for (const auto& p : batch) {
    if (p.user < 0 || static_cast<std::size_t>(p.user) >= items_by_user_.size())
      throw ValidationError("batch user out of range");
    if (items_by_user_[static_cast<std::size_t>(p.user)].size() >= n_items_)
      throw SamplingError("user " + std::to_string(p.user) + " interacted with every item",
                          static_cast<std::size_t>(p.user));
    ItemIndex neg;
    do {
      neg = static_cast<ItemIndex>(rng.below(n_items_));
    } while (interacted(p.user, neg));
    triples.push_back({p.user, p.item, neg});
  }
  return triples;
}

std::vector<BprTriple> sample_negatives(const InteractionSet& train,
                                        std::span<const Interaction> batch, std::uint64_t seed) {
  return NegativeSampler(train).sample(batch, seed);
}

void write_split(const SplitDataset& split, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "train.tsv", pairs_to_tsv(split.train));
  write_file(dir / "validation.tsv", pairs_to_tsv(split.validation));
  write_file(dir / "test.tsv", pairs_to_tsv(split.test));
  write_file(dir / "users.tsv", ids_to_tsv(split.train.user_ids));
  write_file(dir / "items.tsv", ids_to_tsv(split.train.item_ids));

  nlohmann::ordered_json manifest;
  manifest["seed"] = split.seed;
  manifest["ratios"] = split.ratios;
  manifest["noise_ratio"] = split.noise_ratio;
  manifest["n_users"] = split.train.n_users;
  manifest["n_items"] = split.train.n_items;
  manifest["counts"] = {{"train", split.train.pairs.size()},
                        {"validation", split.validation.pairs.size()},
                        {"test", split.test.pairs.size()},
                        {"noise", split.noise_pairs.size()}};
  auto noise = nlohmann::ordered_json::array();
  for (const auto& p : split.noise_pairs)
    noise.push_back({split.train.user_ids.id(p.user), split.train.item_ids.id(p.item)});
  manifest["noise_pairs"] = std::move(noise);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

SplitDataset read_split(const std::filesystem::path& dir) {
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  InteractionSet shape;
  shape.user_ids = read_ids(dir / "users.tsv");
  shape.item_ids = read_ids(dir / "items.tsv");
  shape.n_users = shape.user_ids.size();
  shape.n_items = shape.item_ids.size();
  if (manifest.at("n_users").get<std::size_t>() != shape.n_users ||
      manifest.at("n_items").get<std::size_t>() != shape.n_items)
    throw ValidationError("manifest counts disagree with ID tables in " + dir.string());

  SplitDataset out;
  out.seed = manifest.at("seed").get<std::uint64_t>();
  out.ratios = manifest.at("ratios").get<std::array<double, 3>>();
  out.noise_ratio = manifest.at("noise_ratio").get<double>();
  out.train = with_pairs(shape, read_mapped_pairs(dir / "train.tsv", shape.user_ids, shape.item_ids));
  out.validation =
      with_pairs(shape, read_mapped_pairs(dir / "validation.tsv", shape.user_ids, shape.item_ids));
  out.test = with_pairs(shape, read_mapped_pairs(dir / "test.tsv", shape.user_ids, shape.item_ids));
  for (const auto& pair : manifest.at("noise_pairs"))
    out.noise_pairs.push_back({shape.user_ids.at(pair.at(0).get<std::string>()),
                               shape.item_ids.at(pair.at(1).get<std::string>())});
  return out;
}

}  // namespace ordrec
