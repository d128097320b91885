#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mchain/generators.hpp"
#include "mchain/io.hpp"

using namespace mchain;
using nlohmann::json;

TEST_CASE("chain JSON round trip in exact mode") {
    MarkovChain<Rat> chain = biased_cycle<Rat>(5, make_ratio(2, 3));
    json doc = chain_to_json(chain);
    CHECK(doc["mode"] == "exact");
    CHECK(doc["states"] == 5);
    CHECK(doc["rows"][0][1] == "2/3");
    ChainDoc loaded = chain_from_json(doc);
    REQUIRE(loaded.exact());
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(loaded.as_exact().prob(i, j) == chain.prob(i, j));
}

TEST_CASE("chain JSON round trip in float mode") {
    MarkovChain<double> chain = biased_cycle<double>(4, 0.75);
    json doc = chain_to_json(chain);
    CHECK(doc["mode"] == "float");
    ChainDoc loaded = chain_from_json(doc);
    REQUIRE(!loaded.exact());
    CHECK(loaded.as_float().prob(0, 1) == chain.prob(0, 1));
    CHECK_THROWS_AS(loaded.to_exact(), ConfigError);
    CHECK_NOTHROW(loaded.to_float());
}

TEST_CASE("chain document validation") {
    json good = chain_to_json(biased_cycle<Rat>(3, make_ratio(1, 2)));
    SUBCASE("unknown keys rejected") {
        json doc = good;
        doc["comment"] = "hello";
        CHECK_THROWS_AS(chain_from_json(doc), ConfigError);
    }
    SUBCASE("missing keys rejected") {
        json doc = good;
        doc.erase("rows");
        CHECK_THROWS_AS(chain_from_json(doc), ConfigError);
    }
    SUBCASE("wrong entry types rejected") {
        json doc = good;
        doc["rows"][0][0] = 0.5;
        CHECK_THROWS_AS(chain_from_json(doc), ConfigError);
    }
    SUBCASE("non-stochastic rows rejected") {
        json doc = good;
        doc["rows"][0] = {"1/2", "1/3", "0"};
        CHECK_THROWS_AS(chain_from_json(doc), ConfigError);
    }
    SUBCASE("bad rational strings rejected") {
        json doc = good;
        doc["rows"][0][1] = "not-a-number";
        CHECK_THROWS_AS(chain_from_json(doc), ConfigError);
    }
}

TEST_CASE("generator names") {
    SUBCASE("lazy torus") {
        auto doc = parse_generator("lazy-torus(3,1)");
        REQUIRE(doc);
        CHECK(doc->exact());
        CHECK(doc->n() == 3);
        CHECK(doc->as_exact().prob(0, 0) == make_ratio(1, 2));
    }
    SUBCASE("biased cycle with a rational bias") {
        auto doc = parse_generator("biased-cycle(8,3/4)");
        REQUIRE(doc);
        CHECK(doc->as_exact().prob(0, 1) == make_ratio(3, 4));
    }
    SUBCASE("cluster graph walks") {
        auto plain = parse_generator("gnm(2,12,plain)");
        REQUIRE(plain);
        CHECK(plain->n() == 48);
        auto lazy = parse_generator("gnm(2,12,lazy)");
        REQUIRE(lazy);
        CHECK(lazy->as_exact().prob(0, 0) == make_ratio(1, 2));
    }
    SUBCASE("non-generator strings fall through") {
        CHECK(!parse_generator("some/file.json"));
        CHECK(!parse_generator("unknown(1,2)"));
    }
    SUBCASE("malformed arguments are config errors") {
        CHECK_THROWS_AS(parse_generator("lazy-torus(3)"), ConfigError);
        CHECK_THROWS_AS(parse_generator("biased-cycle(8,x)"), ConfigError);
        CHECK_THROWS_AS(parse_generator("gnm(2,12,fast)"), ConfigError);
        CHECK_THROWS_AS(parse_generator("gnm(2,10,lazy)"), ConfigError);
    }
}

TEST_CASE("set sequence JSON") {
    json doc = {{"prefix", {{0, 1}, {2}}}, {"tail", {3}}};
    SetSequence seq = sequence_from_json(doc, 5);
    CHECK(seq.prefix.size() == 2);
    CHECK(seq.prefix[0] == StateSet::of(5, {0, 1}));
    CHECK(seq.tail == StateSet::singleton(5, 3));
    CHECK(sequence_to_json(seq) == json({{"prefix", {{0, 1}, {2}}}, {"tail", {3}}}));

    SUBCASE("tail required and nonempty") {
        CHECK_THROWS_AS(sequence_from_json(json{{"prefix", json::array()}}, 5), ConfigError);
        CHECK_THROWS_AS(sequence_from_json(json{{"tail", json::array()}}, 5), ConfigError);
    }
    SUBCASE("indices validated against the universe") {
        CHECK_THROWS_AS(sequence_from_json(json{{"tail", {7}}}, 5), ConfigError);
    }
    SUBCASE("unknown keys rejected") {
        CHECK_THROWS_AS(sequence_from_json(json{{"tail", {1}}, {"extra", 1}}, 5), ConfigError);
    }
}

TEST_CASE("file round trip") {
    MarkovChain<Rat> chain = lazy_cycle<Rat>(4);
    std::string path = "chain_roundtrip_test.json";
    write_text(path, chain_to_json(chain).dump());
    ChainDoc loaded = load_chain(path);
    REQUIRE(loaded.exact());
    CHECK(loaded.as_exact().prob(0, 0) == make_ratio(1, 2));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_chain("definitely-missing.json"), ConfigError);
}
