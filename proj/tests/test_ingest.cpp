#include "collabnet/error.hpp"
#include "collabnet/ingest.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace collabnet;

namespace {

PublicationRecord rec(int year, std::set<std::string> countries, std::string field = "phys") {
    return {"r", year, std::move(field), std::move(countries)};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("collabnet_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("ingest") {

TEST_CASE("codes are uppercased and deduplicated") {
    std::istringstream in(R"({"id":"a","year":2010,"field":"phys","countries":["us","US","cn"]})");
    auto r = parse_publications(in);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].year == 2010);
    CHECK(r.records[0].countries == std::set<std::string>{"CN", "US"});
    CHECK(r.skipped == 0);
}

TEST_CASE("empty country list is dropped and counted") {
    std::istringstream in(R"({"id":"a","year":2010,"field":"phys","countries":[]})");
    auto r = parse_publications(in);
    CHECK(r.records.empty());
    CHECK(r.skipped == 1);
}

TEST_CASE("three valid lines and one malformed") {
    std::istringstream in(R"({"id":"a","year":2010,"field":"phys","countries":["US"]}
{"id":"b","year":2010,"field":"phys","countries":["US","CN"]}
{"id":"c","year":"2010","field":"phys","countries":["US"]}
{"id":7,"year":2011,"field":"chem","countries":["DE","FR"]}
)");
    auto r = parse_publications(in);
    CHECK(r.records.size() == 3);
    CHECK(r.skipped == 1);
    CHECK(r.lines == 4);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("line 3") == 0);
    CHECK(r.records[2].id == "7");
}

TEST_CASE("truncated JSON and bad codes are skipped, blank lines ignored") {
    std::istringstream in("{\"year\":2010,\n\n{\"year\":2010,\"field\":\"x\",\"countries\":[\"USA\"]}\n"
                          "{\"year\":2010,\"field\":\"x\",\"countries\":[\"U1\"]}\n"
                          "{\"year\":2010,\"field\":\"x\",\"countries\":[\"FR\"]}\n");
    auto r = parse_publications(in);
    CHECK(r.records.size() == 1);
    CHECK(r.records[0].id == "line:4");
    CHECK(r.skipped == 3);
}

TEST_CASE("unreadable input is fatal") {
    CHECK_THROWS_AS(parse_publications_file("/nonexistent/pubs.jsonl"), DataError);
}

TEST_CASE("full counting") {
    SUBCASE("one pair") {
        std::vector<PublicationRecord> rs{rec(2010, {"US", "CN"})};
        auto e = build_annual_edges(rs, 2010, "phys");
        CHECK(e.edges.size() == 1);
        CHECK(e.edges.at({"CN", "US"}) == 1);
    }
    SUBCASE("single country has no pair") {
        std::vector<PublicationRecord> rs{rec(2010, {"US"})};
        CHECK(build_annual_edges(rs, 2010, "phys").edges.empty());
    }
    SUBCASE("hand enumeration") {
        std::vector<PublicationRecord> rs{rec(2010, {"A", "B", "C"}), rec(2010, {"A", "B"})};
        auto e = build_annual_edges(rs, 2010, "phys");
        CHECK(e.edges.at({"A", "B"}) == 2);
        CHECK(e.edges.at({"A", "C"}) == 1);
        CHECK(e.edges.at({"B", "C"}) == 1);
    }
    SUBCASE("empty input") { CHECK(build_annual_edges({}, 2010, "phys").edges.empty()); }
}

TEST_CASE("total edge weight equals the sum of C(k,2) over records") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> pool{"AR", "BR", "CN", "DE", "FR", "GB", "IN", "JP", "US", "ZA"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PublicationRecord> rs;
        std::int64_t expected = 0;
        for (int k = 0; k < 40; ++k) {
            std::set<std::string> cs;
            const auto size = 1 + rng() % 6;
            while (cs.size() < size) cs.insert(pool[rng() % pool.size()]);
            expected += static_cast<std::int64_t>(cs.size() * (cs.size() - 1) / 2);
            rs.push_back(rec(2000, cs));
        }
        CHECK(build_annual_edges(rs, 2000, "phys").total_weight() == expected);
    }
}

TEST_CASE("stats and filtering") {
    std::vector<PublicationRecord> rs;
    for (int k = 0; k < 9; ++k) rs.push_back(rec(2010, {"X", "US"}));
    for (int k = 0; k < 12; ++k) rs.push_back(rec(2010, {"CN", "US"}));
    rs.push_back(rec(2010, {"X"}));
    auto stats = compute_stats(rs, 2010, "phys");
    auto edges = build_annual_edges(rs, 2010, "phys");
    CHECK(stats.find("X")->intl_pubs == 9);
    CHECK(stats.find("X")->total_pubs == 10);
    CHECK(stats.find("US")->intl_pubs == 21);
    CHECK(stats.publications == 22);
    CHECK(stats.international == 21);

    SUBCASE("country with 9 international papers is removed") {
        auto kept = filter_countries(edges, stats, 10);
        CHECK(kept.edges.size() == 1);
        CHECK(kept.edges.contains({"CN", "US"}));
    }
    SUBCASE("threshold 0 is the identity") { CHECK(filter_countries(edges, stats, 0).edges == edges.edges); }
    SUBCASE("missing country names it") {
        SliceStats partial = stats;
        partial.countries.erase("CN");
        try {
            filter_countries(edges, partial, 10);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("CN") != std::string::npos);
        }
    }
    SUBCASE("negative threshold") { CHECK_THROWS_AS(filter_countries(edges, stats, -1), DataError); }
}

TEST_CASE("filter keeps edges between qualifying countries only") {
    EdgeList e{2010, "f", {{{"A", "B"}, 5}, {{"B", "C"}, 3}}};
    SliceStats s;
    s.countries["A"] = {"A", 2010, "f", 20, 20};
    s.countries["B"] = {"B", 2010, "f", 20, 20};
    s.countries["C"] = {"C", 2010, "f", 3, 3};
    auto kept = filter_countries(e, s, 10);
    CHECK(kept.edges.size() == 1);
    CHECK(kept.edges.at({"A", "B"}) == 5);
}

TEST_CASE("filter is idempotent and monotone in the threshold") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        EdgeList e{2000, "f", {}};
        SliceStats s;
        for (char c = 'A'; c <= 'H'; ++c) {
            std::string code{c, 'Z'};
            s.countries[code] = {code, 2000, "f", static_cast<std::int64_t>(rng() % 30), 40};
        }
        for (char a = 'A'; a <= 'H'; ++a)
            for (char b = a + 1; b <= 'H'; ++b)
                if (rng() % 2) e.edges[make_pair_key({a, 'Z'}, {b, 'Z'})] = 1 + static_cast<std::int64_t>(rng() % 9);
        const auto t1 = static_cast<std::int64_t>(rng() % 30), t2 = t1 + static_cast<std::int64_t>(rng() % 10);
        auto once = filter_countries(e, s, t1);
        CHECK(filter_countries(once, s, t1).edges == once.edges);
        auto higher = filter_countries(e, s, t2);
        for (const auto& [pair, w] : higher.edges) CHECK(once.edges.contains(pair));
    }
}

TEST_CASE("participation series") {
    SUBCASE("ten publications, three international with CN") {
        std::vector<PublicationRecord> rs;
        for (int k = 0; k < 3; ++k) rs.push_back(rec(2010, {"CN", "US"}));
        rs.push_back(rec(2010, {"DE", "US"}));
        for (int k = 0; k < 6; ++k) rs.push_back(rec(2010, {"CN"}));
        for (int k = 0; k < 4; ++k) rs.push_back(rec(2011, {"CN", "JP"}));
        auto s = participation_series(rs, "CN");
        CHECK(s.at_year(2010).value() == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(s.at_year(2011).value() == 1.0);
        CHECK(s.name == "participation:CN");

        auto intl = participation_series(rs, "CN", ParticipationBase::international);
        CHECK(intl.at_year(2010).value() == doctest::Approx(0.75));
    }
    SUBCASE("absent country gives zeros") {
        std::vector<PublicationRecord> rs{rec(2010, {"US", "DE"}), rec(2011, {"US"})};
        for (const auto& p : participation_series(rs, "CN").points) CHECK(p.value.value() == 0.0);
    }
    SUBCASE("year without publications is omitted") {
        std::vector<PublicationRecord> rs{rec(2010, {"US", "CN"}), rec(2012, {"US"})};
        auto s = participation_series(rs, "CN");
        CHECK(s.years() == std::vector<int>{2010, 2012});
    }
    SUBCASE("needs two years") {
        std::vector<PublicationRecord> rs{rec(2010, {"US", "CN"})};
        CHECK_THROWS_AS(participation_series(rs, "CN"), DataError);
    }
}

TEST_CASE("participation values stay in [0, 1]") {
    std::mt19937_64 rng(3);
    const std::vector<std::string> pool{"CN", "US", "DE", "FR", "JP"};
    std::vector<PublicationRecord> rs;
    for (int k = 0; k < 500; ++k) {
        std::set<std::string> cs;
        const auto size = 1 + rng() % 4;
        while (cs.size() < size) cs.insert(pool[rng() % pool.size()]);
        rs.push_back(rec(2000 + static_cast<int>(rng() % 6), cs));
    }
    for (const auto& c : pool)
        for (auto base : {ParticipationBase::total, ParticipationBase::international})
            for (const auto& p : participation_series(rs, c, base).points) {
                CHECK(*p.value >= 0.0);
                CHECK(*p.value <= 1.0);
            }
}

TEST_CASE("edge csv") {
    std::istringstream in("year,field,country_a,country_b,weight\n2010,phys,US,CN,4\n2010,phys,CN,US,1\n2011,phys,DE,FR,2\n");
    auto lists = read_edge_csv(in);
    REQUIRE(lists.size() == 2);
    CHECK(lists[0].edges.at({"CN", "US"}) == 5);
    std::istringstream bad("year,field,country_a,country_b,weight\n2010,phys,US,US,4\n");
    CHECK_THROWS_AS(read_edge_csv(bad), DataError);
    std::istringstream badw("year,field,country_a,country_b,weight\n2010,phys,US,CN,x\n");
    CHECK_THROWS_AS(read_edge_csv(badw), DataError);
}

TEST_CASE("corpus round trip") {
    ParseReport parsed;
    for (int k = 0; k < 12; ++k) parsed.records.push_back(rec(2010, {"CN", "US"}, "phys"));
    for (int k = 0; k < 5; ++k) parsed.records.push_back(rec(2010, {"CN", "KE"}, "bio"));
    for (int k = 0; k < 11; ++k) parsed.records.push_back(rec(2011, {"DE", "US"}, "bio"));
    const auto dir = scratch("corpus");
    write_corpus(dir, parsed, {10, "abc123"});
    auto corpus = Corpus::open(dir);
    CHECK(corpus.years() == std::vector<int>{2010, 2011});
    CHECK(corpus.fields() == std::vector<std::string>{"all", "bio", "phys"});
    CHECK(corpus.threshold() == 10);
    CHECK(corpus.source() == "publications");
    CHECK(corpus.has(2010, "phys"));
    CHECK_FALSE(corpus.has(2011, "phys"));
    auto all2010 = corpus.edges(2010, "all");
    CHECK(all2010.edges.size() == 1); // KE has 5 international papers
    CHECK(all2010.edges.at({"CN", "US"}) == 12);
    CHECK(corpus.edges(2010, "bio").edges.empty());
    auto st = corpus.stats(2010, "all");
    CHECK(st.find("KE")->intl_pubs == 5);
    CHECK(st.publications == 17);
    CHECK_THROWS_AS(corpus.edges(2012, "all"), DataError);

    std::ifstream m(dir / "manifest.json");
    std::string text((std::istreambuf_iterator<char>(m)), {});
    CHECK(text.find("abc123") != std::string::npos);
    std::ifstream e(dir / "edges_2010_all.csv");
    std::string first;
    std::getline(e, first);
    CHECK(first == "# config_hash=abc123");
}

TEST_CASE("corpus from pre-aggregated edges pools fields") {
    std::vector<EdgeList> lists{{2010, "phys", {{{"CN", "US"}, 3}}}, {2010, "bio", {{{"CN", "US"}, 2}, {{"DE", "US"}, 1}}}};
    const auto dir = scratch("edges");
    write_corpus_from_edges(dir, lists);
    auto corpus = Corpus::open(dir);
    CHECK(corpus.source() == "edges");
    CHECK(corpus.threshold() == 0);
    auto pooled = corpus.edges(2010, "all");
    CHECK(pooled.edges.at({"CN", "US"}) == 5);
    CHECK(corpus.stats(2010, "all").find("US")->total_pubs == 6);
}

TEST_CASE("missing manifest") { CHECK_THROWS_AS(Corpus::open(scratch("empty")), DataError); }

} // TEST_SUITE
