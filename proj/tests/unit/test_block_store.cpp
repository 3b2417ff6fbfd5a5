#include <fstream>
#include <thread>

#include "adx/block_file.hpp"
#include "adx/datagen.hpp"
#include "adx/index_builder.hpp"
#include "adx/paths.hpp"
#include "adx/replica_registry.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adx;
using adx::test::TempDir;

TEST_SUITE("schema") {
  TEST_CASE("rejects empty and duplicate attribute lists") {
    CHECK_THROWS_AS(Schema(std::vector<Attribute>{}), SchemaError);
    CHECK_THROWS_AS(Schema({{"a", AttributeType::int64()}, {"a", AttributeType::float64()}}), SchemaError);
    CHECK_THROWS_AS(Schema({{"s", AttributeType::fixed_string(0)}}), SchemaError);
  }

  TEST_CASE("type names round-trip") {
    for (auto t : {AttributeType::int64(), AttributeType::float64(), AttributeType::fixed_string(100)})
      CHECK(parse_attribute_type(to_string(t)) == t);
    CHECK_THROWS(parse_attribute_type("string(x)"));
    CHECK_THROWS(parse_attribute_type("int32"));
  }

  TEST_CASE("projection keeps schema order") {
    Schema s = test::mixed_schema();
    CHECK(s.project({"d", "a"}).names() == std::vector<std::string>{"a", "d"});
    CHECK_THROWS_AS(s.project({"zz"}), SchemaError);
    CHECK(s.record_width() == 8 + 8 + 12 + 8);
  }
}

TEST_SUITE("block file") {
  TEST_CASE("three attribute block of 1000 records round-trips") {
    TempDir dir;
    std::mt19937_64 rng(11);
    Schema s({{"a", AttributeType::int64()}, {"b", AttributeType::float64()}, {"c", AttributeType::fixed_string(9)}});
    DataBlock b = test::random_block(rng, s, 1000, 7);
    auto bytes = write_block(b, dir / "blk");
    CHECK(bytes == std::filesystem::file_size(dir / "blk"));
    CHECK(bytes == serialized_size(b));
    CHECK(read_block(dir / "blk") == b);
  }

  TEST_CASE("empty block round-trips") {
    TempDir dir;
    DataBlock b;
    b.id = BlockId{3};
    b.schema = test::mixed_schema();
    for (const auto& a : b.schema.attributes()) b.columns.emplace_back(a.type);
    write_block(b, dir / "blk");
    DataBlock back = read_block(dir / "blk");
    CHECK(back == b);
    CHECK(back.record_count == 0);
  }

  TEST_CASE("index with 128-record pages over 1000 records has 8 entries") {
    TempDir dir;
    std::mt19937_64 rng(5);
    DataBlock b = test::random_block(rng, test::mixed_schema(), 1000);
    BuiltIndex built = build_index(b, "d", 128);
    write_block(built.block, dir / "blk");
    BlockReader reader(dir / "blk");
    REQUIRE(reader.index());
    const auto& idx = *reader.index();
    CHECK(idx.entries.size() == 8);
    CHECK(idx.page_size_records == 128);
    CHECK(idx.attribute == "d");
    const Column& sorted = built.block.column("d");
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(idx.entries[k].start_record == 128 * k);
      CHECK(compare_values(idx.entries[k].first_key, sorted.value_at(128 * k)) == 0);
    }
    CHECK(read_block(dir / "blk") == built.block);
  }

  TEST_CASE("unsorted block with an index is rejected before writing") {
    TempDir dir;
    std::mt19937_64 rng(6);
    DataBlock b = test::random_block(rng, test::mixed_schema(), 300);
    BuiltIndex built = build_index(b, "a", 64);
    DataBlock broken = b;
    broken.sort_attribute = "a";
    broken.index = built.index;
    CHECK_THROWS_AS(write_block(broken, dir / "blk"), FormatError);
    CHECK_FALSE(std::filesystem::exists(dir / "blk"));
  }

  TEST_CASE("random blocks round-trip") {
    TempDir dir;
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
      const std::size_t rows = rng() % 700;
      DataBlock b = test::random_block(rng, test::mixed_schema(), rows, i);
      if (i % 2 && rows > 0) {
        BuiltIndex built = build_index(b, i % 4 == 1 ? "c" : "b", 1 + rng() % 100);
        b = built.block;
        if (i % 3 == 0) b.permutation = built.permutation;
      }
      write_block(b, dir / "blk");
      REQUIRE(read_block(dir / "blk") == b);
    }
  }

  TEST_CASE("projected reads never touch other columns") {
    TempDir dir;
    Table t = gen_uservisits(2000, 3);
    DataBlock b;
    b.id = BlockId{1};
    b.schema = t.schema;
    b.record_count = t.rows();
    b.columns = t.columns;
    write_block(b, dir / "blk");
    const auto full = std::filesystem::file_size(dir / "blk");

    for (const auto& a : t.schema.attributes()) {
      BlockReader reader(dir / "blk");
      DataBlock p = reader.read({a.name});
      CHECK(p.schema.size() == 1);
      CHECK(p.column(a.name) == b.column(a.name));
      const std::uint64_t column_bytes = std::uint64_t{a.type.width} * b.record_count;
      const auto& h = reader.header();
      CHECK(reader.bytes_read() <= h.header_bytes + h.index_bytes + column_bytes + 1 + 8);
      CHECK(reader.bytes_read() >= column_bytes);
      CHECK(reader.bytes_read() < full);
    }

    std::uint64_t read = 0;
    read_block(dir / "blk", {"searchWord"}, std::nullopt, &read);
    const double share = 32.0 / static_cast<double>(t.schema.record_width());
    CHECK(static_cast<double>(read) / static_cast<double>(full) == doctest::Approx(share).epsilon(0.05));

    read = 0;
    read_block(dir / "blk", t.schema.name_set(), std::nullopt, &read);
    CHECK(read == full);
  }

  TEST_CASE("row range [1024, 2048) returns exactly those records") {
    TempDir dir;
    std::mt19937_64 rng(8);
    Schema s({{"a", AttributeType::int64()}, {"b", AttributeType::int64()}, {"c", AttributeType::fixed_string(4)},
              {"d", AttributeType::int64()}, {"e", AttributeType::float64()}});
    DataBlock b = test::random_block(rng, s, 4000);
    write_block(b, dir / "blk");
    DataBlock part = read_block(dir / "blk", {"a", "b", "c", "d"}, RowRange{1024, 2048});
    CHECK(part.record_count == 1024);
    CHECK(part.schema.names() == std::vector<std::string>{"a", "b", "c", "d"});
    for (const auto& name : part.schema.names()) {
      CHECK(part.column(name).size() == 1024);
      CHECK(part.column(name) == b.column(name).slice({1024, 2048}));
    }
  }

  TEST_CASE("malformed files and unknown attributes are reported") {
    TempDir dir;
    std::ofstream(dir / "junk") << "not a block file at all";
    CHECK_THROWS_AS(BlockReader(dir / "junk"), FormatError);
    CHECK_THROWS_AS(BlockReader(dir / "missing"), IoError);

    std::mt19937_64 rng(1);
    write_block(test::random_block(rng, test::mixed_schema(), 10), dir / "blk");
    BlockReader reader(dir / "blk");
    CHECK_THROWS_AS(reader.read({"nope"}), SchemaError);

    // Truncate the data section.
    auto size = std::filesystem::file_size(dir / "blk");
    std::filesystem::resize_file(dir / "blk", size - 5);
    CHECK_THROWS_AS(BlockReader(dir / "blk"), FormatError);
  }
}

TEST_SUITE("paths") {
  TEST_CASE("pseudo replica path follows pseudo/blk_<id>/<attr>") {
    const std::filesystem::path root = "/data/cluster";
    auto p = pseudo_replica_path(root, NodeId{2}, BlockId{42}, "d");
    CHECK(p.string() == "/data/cluster/node_2/pseudo/blk_42/d");
    CHECK(p == pseudo_replica_path(root, NodeId{2}, BlockId{42}, "d"));
    CHECK(p != pseudo_replica_path(root, NodeId{2}, BlockId{42}, "e"));
    CHECK(normal_replica_path(root, NodeId{0}, BlockId{42}).string() == "/data/cluster/node_0/blocks/blk_42");
    auto tmp = pseudo_temp_path(root, NodeId{2}, BlockId{42}, "d", 17);
    CHECK(tmp.string() == "/data/cluster/node_2/pseudo/blk_42/.d.tmp.17");
  }
}

namespace {

BlockReplicaInfo normal_on(std::uint16_t node, const Schema& s, std::optional<std::string> sorted = {}) {
  BlockReplicaInfo r;
  r.node = NodeId{node};
  r.kind = ReplicaKind::normal;
  r.available_attributes = s.name_set();
  r.indexed_attribute = std::move(sorted);
  r.path = "n" + std::to_string(node);
  return r;
}

BlockReplicaInfo pseudo_on(std::uint16_t node, const Schema& s, const std::string& attr) {
  BlockReplicaInfo r;
  r.node = NodeId{node};
  r.kind = ReplicaKind::pseudo;
  r.available_attributes = s.name_set();
  r.indexed_attribute = attr;
  r.path = "p" + std::to_string(node) + attr;
  return r;
}

}  // namespace

TEST_SUITE("registry") {
  TEST_CASE("register, idempotence and lookup") {
    Schema s = test::mixed_schema();
    ReplicaRegistry reg;
    reg.set_dataset(s, 3);
    reg.add_block(BlockId{42}, 100);
    REQUIRE(reg.register_replica(BlockId{42}, normal_on(0, s)));

    CHECK(reg.register_replica(BlockId{42}, pseudo_on(1, s, "d")));
    CHECK(reg.lookup(BlockId{42}).size() == 2);
    CHECK_FALSE(reg.register_replica(BlockId{42}, pseudo_on(1, s, "d")));
    CHECK_FALSE(reg.register_replica(BlockId{42}, pseudo_on(2, s, "d")));
    CHECK(reg.lookup(BlockId{42}).size() == 2);

    CHECK(reg.find_index(BlockId{42}, "d")->kind == ReplicaKind::pseudo);
    CHECK_FALSE(reg.find_index(BlockId{42}, "b"));
    CHECK_THROWS_AS(reg.register_replica(BlockId{7}, pseudo_on(1, s, "d")), RegistryError);
  }

  TEST_CASE("find_index prefers normal over pseudo over partial") {
    Schema s = test::mixed_schema();
    ReplicaRegistry reg;
    reg.set_dataset(s, 3);
    reg.add_block(BlockId{1}, 10);
    reg.register_replica(BlockId{1}, normal_on(0, s));
    reg.register_replica(BlockId{1}, normal_on(1, s, "a"));
    CHECK(reg.find_index(BlockId{1}, "a")->kind == ReplicaKind::normal);

    BlockReplicaInfo partial;
    partial.node = NodeId{2};
    partial.kind = ReplicaKind::partial_pseudo;
    partial.indexed_attribute = "d";
    partial.available_attributes = {"d", "b"};
    partial.has_permutation_vector = true;
    reg.register_replica(BlockId{1}, partial);
    CHECK(reg.find_index(BlockId{1}, "d")->kind == ReplicaKind::partial_pseudo);

    reg.register_replica(BlockId{1}, normal_on(2, s, "d"));
    CHECK(reg.find_index(BlockId{1}, "d")->kind == ReplicaKind::normal);
    CHECK(reg.find_index(BlockId{1}, "d")->node == NodeId{2});
  }

  TEST_CASE("replica kind invariants are enforced") {
    Schema s = test::mixed_schema();
    ReplicaRegistry reg;
    reg.set_dataset(s, 2);
    reg.add_block(BlockId{1}, 10);
    reg.register_replica(BlockId{1}, normal_on(0, s));
    reg.register_replica(BlockId{1}, normal_on(1, s));
    CHECK_THROWS_AS(reg.register_replica(BlockId{1}, normal_on(2, s)), RegistryError);

    BlockReplicaInfo bad = pseudo_on(0, s, "a");
    bad.available_attributes = {"a"};
    CHECK_THROWS_AS(reg.register_replica(BlockId{1}, bad), RegistryError);

    BlockReplicaInfo no_perm;
    no_perm.node = NodeId{0};
    no_perm.kind = ReplicaKind::partial_pseudo;
    no_perm.indexed_attribute = "a";
    no_perm.available_attributes = {"a"};
    CHECK_THROWS_AS(reg.register_replica(BlockId{1}, no_perm), RegistryError);
  }

  TEST_CASE("journal replay restores the registry") {
    TempDir dir;
    Schema s = test::mixed_schema();
    {
      ReplicaRegistry reg(dir / "journal");
      reg.set_dataset(s, 2);
      for (std::uint64_t b = 0; b < 5; ++b) {
        reg.add_block(BlockId{b}, 100 + b);
        reg.register_replica(BlockId{b}, normal_on(b % 3, s));
        reg.register_replica(BlockId{b}, normal_on((b + 1) % 3, s, "a"));
      }
      reg.register_replica(BlockId{3}, pseudo_on(0, s, "d"));
    }
    ReplicaRegistry back(dir / "journal");
    CHECK(back.schema() == s);
    CHECK(back.dataset().blocks.size() == 5);
    CHECK(back.dataset().record_counts.at(BlockId{4}) == 104);
    CHECK(back.lookup(BlockId{3}).size() == 3);
    CHECK(back.find_index(BlockId{3}, "d")->node == NodeId{0});
    CHECK(back.count_indexed_blocks("a") == 5);
  }

  TEST_CASE("concurrent registrations of one index leave a single entry") {
    Schema s = test::mixed_schema();
    ReplicaRegistry reg;
    reg.set_dataset(s, 3);
    reg.add_block(BlockId{9}, 1);
    reg.register_replica(BlockId{9}, normal_on(0, s));
    std::atomic<int> wins{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
      threads.emplace_back([&, t] {
        for (int i = 0; i < 50; ++i)
          if (reg.register_replica(BlockId{9}, pseudo_on(static_cast<std::uint16_t>(t % 3), s, "d"))) ++wins;
      });
    for (auto& th : threads) th.join();
    CHECK(wins == 1);
    std::size_t pseudo = 0;
    for (const auto& r : reg.lookup(BlockId{9})) pseudo += r.kind == ReplicaKind::pseudo;
    CHECK(pseudo == 1);
  }
}
