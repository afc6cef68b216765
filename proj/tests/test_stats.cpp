#include <doctest.h>

#include <cmath>
#include <fstream>

#include "coocnet/errors.hpp"
#include "coocnet/rng.hpp"
#include "coocnet/stats.hpp"
#include "oracles.hpp"

using namespace coocnet;

namespace {

FeatureMatrix matrix(std::vector<std::string> docs,
                     std::vector<std::string> features,
                     std::vector<double> values) {
  FeatureMatrix m;
  m.doc_ids = std::move(docs);
  m.feature_names = std::move(features);
  m.values = std::move(values);
  return m;
}

GroupLabeling labels_of(
    std::initializer_list<std::pair<std::string, std::string>> pairs) {
  GroupLabeling labels;
  for (const auto& [doc, label] : pairs) labels.label_of[doc] = label;
  return labels;
}

} // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("shuffle_ztest flags features that cannot vary") {
  // identical feature values for every doc -> zero variance under shuffling
  FeatureMatrix m = matrix({"d1", "d2", "d3", "d4"}, {"f"},
                           {2.5, 2.5, 2.5, 2.5});
  const auto labels = labels_of(
      {{"d1", "a"}, {"d2", "a"}, {"d3", "b"}, {"d4", "b"}});
  const auto res = shuffle_ztest(m, labels, "a", 50, 1);
  REQUIRE(res.size() == 1);
  CHECK(res[0].degenerate);
  CHECK(std::isnan(res[0].z));
}

TEST_CASE("a group covering all docs is degenerate for every feature") {
  FeatureMatrix m =
      matrix({"d1", "d2", "d3"}, {"f1", "f2"}, {1, 9, 2, 8, 3, 7});
  const auto labels =
      labels_of({{"d1", "only"}, {"d2", "only"}, {"d3", "only"}});
  const auto res = shuffle_ztest(m, labels, "only", 20, 3);
  for (const auto& r : res) CHECK(r.degenerate);
}

TEST_CASE("shuffle_ztest detects a planted shift") {
  Rng rng(17);
  const std::size_t n_docs = 120, group_size = 40;
  FeatureMatrix m;
  m.feature_names = {"shifted", "noise"};
  GroupLabeling labels;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::string id = "d" + std::to_string(d);
    m.doc_ids.push_back(id);
    const bool in_group = d < group_size;
    labels.label_of[id] = in_group ? "g" : "rest";
    m.values.push_back(rng.normal() + (in_group ? 2.0 : 0.0));
    m.values.push_back(rng.normal());
  }
  const auto res = shuffle_ztest(m, labels, "g", 500, 11);
  REQUIRE(res.size() == 2);
  CHECK(res[0].z > 1.96);
  CHECK(std::fabs(res[1].z) < 3.0);
  CHECK(res[0].obs_mean > res[0].null_mean);
}

TEST_CASE("shuffle z is equivariant to affine feature maps") {
  Rng rng(5);
  FeatureMatrix m;
  m.feature_names = {"f"};
  GroupLabeling labels;
  for (std::size_t d = 0; d < 40; ++d) {
    const std::string id = "d" + std::to_string(d);
    m.doc_ids.push_back(id);
    labels.label_of[id] = d < 15 ? "g" : "rest";
    m.values.push_back(rng.normal() + (d < 15 ? 0.8 : 0.0));
  }
  const double z = shuffle_ztest(m, labels, "g", 400, 21)[0].z;

  FeatureMatrix scaled = m;
  for (auto& v : scaled.values) v = -3.0 * v + 11.0;
  const double z_scaled = shuffle_ztest(scaled, labels, "g", 400, 21)[0].z;
  CHECK(z_scaled == doctest::Approx(-z).epsilon(1e-9));
}

TEST_CASE("shuffle_ztest results do not depend on the thread count") {
  Rng rng(23);
  FeatureMatrix m;
  m.feature_names = {"f1", "f2", "f3"};
  GroupLabeling labels;
  for (std::size_t d = 0; d < 60; ++d) {
    const std::string id = "d" + std::to_string(d);
    m.doc_ids.push_back(id);
    labels.label_of[id] = d % 3 == 0 ? "g" : "rest";
    for (int f = 0; f < 3; ++f) m.values.push_back(rng.normal());
  }
  const auto one = shuffle_ztest(m, labels, "g", 200, 9, 1);
  const auto four = shuffle_ztest(m, labels, "g", 200, 9, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t f = 0; f < one.size(); ++f) {
    CHECK(one[f].z == four[f].z);
    CHECK(one[f].null_mean == four[f].null_mean);
    CHECK(one[f].null_std == four[f].null_std);
  }
}

TEST_CASE("purist and transitioning contributors are told apart") {
  Partition clusters;
  clusters.group_of = {{"nyt", "L"}, {"guardian", "L"}, {"breitbart", "R"}};

  const std::map<std::string, std::set<std::string>> outlets = {
      {"both_l", {"nyt", "guardian"}},
      {"crosser", {"nyt", "breitbart"}},
      {"single", {"breitbart"}},
  };
  const auto labels = purist_transition_labels(outlets, clusters);
  CHECK(labels.at("both_l").purist);
  CHECK(labels.at("both_l").cluster == "L");
  CHECK_FALSE(labels.at("crosser").purist);
  CHECK(labels.at("single").purist);
  CHECK(labels.at("single").cluster == "R");

  SUBCASE("contributor without outlets is an error") {
    const std::map<std::string, std::set<std::string>> empty_outlets = {
        {"nobody", {}}};
    CHECK_THROWS_AS(purist_transition_labels(empty_outlets, clusters),
                    std::invalid_argument);
  }
  SUBCASE("unclustered outlet is an error") {
    const std::map<std::string, std::set<std::string>> stray = {
        {"writer", {"unknown_outlet"}}};
    CHECK_THROWS_AS(purist_transition_labels(stray, clusters), DataError);
  }
}

TEST_CASE("within_cluster_ztest needs both kinds of contributors") {
  FeatureMatrix m = matrix({"d1", "d2", "d3", "d4"}, {"f"}, {1, 2, 3, 4});
  const std::map<std::string, std::string> doc_contributor = {
      {"d1", "c1"}, {"d2", "c2"}, {"d3", "c3"}, {"d4", "c4"}};
  std::map<std::string, PuristLabel> labels;
  for (const auto* c : {"c1", "c2", "c3", "c4"}) {
    labels[c] = PuristLabel{false, ""}; // everyone transitioning
  }
  CHECK_THROWS_AS(
      within_cluster_ztest(m, doc_contributor, labels, "L", 50, 1),
      std::invalid_argument);
}

TEST_CASE("within_cluster_ztest finds a planted transitioning niche") {
  // 30 contributors with 3 docs each inside one cluster; transitioning
  // contributors get a large boost on feature 0.
  Rng rng(31);
  FeatureMatrix m;
  m.feature_names = {"niche", "noise"};
  std::map<std::string, std::string> doc_contributor;
  std::map<std::string, PuristLabel> labels;
  for (int c = 0; c < 30; ++c) {
    const std::string contributor = "c" + std::to_string(c);
    const bool transitioning = c < 10;
    labels[contributor] =
        transitioning ? PuristLabel{false, ""} : PuristLabel{true, "L"};
    for (int d = 0; d < 3; ++d) {
      const std::string doc = contributor + "_" + std::to_string(d);
      m.doc_ids.push_back(doc);
      doc_contributor[doc] = contributor;
      m.values.push_back(rng.normal() + (transitioning ? 3.0 : 0.0));
      m.values.push_back(rng.normal());
    }
  }
  const auto res =
      within_cluster_ztest(m, doc_contributor, labels, "L", 500, 77);
  REQUIRE(res.size() == 2);
  CHECK(res[0].z > 1.96); // transitioning over-representation is positive
  CHECK(std::fabs(res[1].z) < 3.5);
}

TEST_CASE("lexicon scoring") {
  Lexicon lex;
  lex.categories.push_back({"certain", {"always", "never"}, {}});
  lex.categories.push_back({"conservative", {}, {"conserv"}});
  lex.categories.push_back({"empty", {}, {}});

  SUBCASE("percentage of matched tokens") {
    const auto score = lexicon_score("always never maybe", lex);
    CHECK(score.by_category.at("certain") ==
          doctest::Approx(100.0 * 2.0 / 3.0));
    CHECK(score.by_category.at("empty") == 0.0);
    CHECK_FALSE(score.zero_tokens);
  }
  SUBCASE("prefix patterns match") {
    const auto score = lexicon_score("conservatives won", lex);
    CHECK(score.by_category.at("conservative") == doctest::Approx(50.0));
  }
  SUBCASE("a token can score in several categories") {
    Lexicon both;
    both.categories.push_back({"a", {"word"}, {}});
    both.categories.push_back({"b", {}, {"wor"}});
    const auto score = lexicon_score("word", both);
    CHECK(score.by_category.at("a") == doctest::Approx(100.0));
    CHECK(score.by_category.at("b") == doctest::Approx(100.0));
  }
  SUBCASE("empty text sets the zero-token flag") {
    const auto score = lexicon_score("", lex);
    CHECK(score.zero_tokens);
    CHECK(score.by_category.at("certain") == 0.0);
  }
}

TEST_CASE("lexicon files parse in both formats") {
  namespace fs = std::filesystem;
  SUBCASE("indented format") {
    const auto path = fs::temp_directory_path() / "lex_indent.txt";
    std::ofstream(path) << "certain\n  always\n  never\n"
                        << "conservative\n  conserv*\n";
    const Lexicon lex = read_lexicon(path);
    REQUIRE(lex.categories.size() == 2);
    CHECK(lex.categories[0].name == "certain");
    CHECK(lex.categories[0].literals.size() == 2);
    CHECK(lex.categories[1].prefixes == std::vector<std::string>{"conserv"});
  }
  SUBCASE("two-column CSV") {
    const auto path = fs::temp_directory_path() / "lex_csv.csv";
    std::ofstream(path) << "category,pattern\ncertain,always\ncertain,never\n"
                        << "conservative,conserv*\n";
    const Lexicon lex = read_lexicon(path);
    REQUIRE(lex.categories.size() == 2);
    CHECK(lex.categories[1].prefixes == std::vector<std::string>{"conserv"});
  }
}

TEST_CASE("mann_whitney matches brute force on random samples") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n1 = 1 + rng.index(10);
    const std::size_t n2 = 1 + rng.index(10);
    std::vector<double> x(n1), y(n2);
    // Small integer values force plenty of ties.
    for (auto& v : x) v = static_cast<double>(rng.index(5));
    for (auto& v : y) v = static_cast<double>(rng.index(5));

    const MannWhitneyResult res = mann_whitney(x, y);
    CHECK(res.u == doctest::Approx(oracle::brute_force_u(x, y)).epsilon(1e-12));

    const MannWhitneyResult rev = mann_whitney(y, x);
    CHECK(res.u + rev.u ==
          doctest::Approx(static_cast<double>(n1 * n2)).epsilon(1e-12));
    CHECK(res.p_two_sided == doctest::Approx(rev.p_two_sided).epsilon(1e-12));
  }
}

TEST_CASE("mann_whitney hand values") {
  CHECK(mann_whitney(std::vector<double>{1, 2, 3},
                     std::vector<double>{4, 5, 6})
            .u == doctest::Approx(0.0));
  // equal multisets share everything: U = n1 n2 / 2
  CHECK(mann_whitney(std::vector<double>{1, 2, 2},
                     std::vector<double>{2, 1, 2})
            .u == doctest::Approx(4.5));
  // all values identical -> p = 1
  CHECK(mann_whitney(std::vector<double>{3, 3}, std::vector<double>{3, 3, 3})
            .p_two_sided == doctest::Approx(1.0));
  CHECK_THROWS_AS(mann_whitney({}, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("exact p agrees with literal enumeration") {
  Rng rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n1 = 2 + rng.index(5);
    const std::size_t n2 = 2 + rng.index(5);
    std::vector<double> x(n1), y(n2);
    for (auto& v : x) v = static_cast<double>(rng.index(4));
    for (auto& v : y) v = static_cast<double>(rng.index(4));
    const MannWhitneyResult res = mann_whitney(x, y);
    REQUIRE(res.exact);
    const double expected = oracle::brute_force_exact_p(x, y);
    CHECK(res.p_two_sided == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("large samples fall back to a sane normal approximation") {
  Rng rng(7);
  std::vector<double> x(30), y(25);
  for (auto& v : x) v = rng.normal() + 1.0;
  for (auto& v : y) v = rng.normal();
  const MannWhitneyResult res = mann_whitney(x, y);
  CHECK_FALSE(res.exact);
  CHECK(res.p_two_sided > 0.0);
  CHECK(res.p_two_sided < 0.05); // unit shift on 55 samples is significant
}

TEST_CASE("auc_from_u") {
  CHECK(auc_from_u(0.0, 4, 5) == 0.0);
  CHECK(auc_from_u(20.0, 4, 5) == 1.0);
  CHECK(auc_from_u(10.0, 4, 5) == 0.5);
  CHECK_THROWS_AS(auc_from_u(1.0, 0, 5), std::invalid_argument);

  // Paper-style consistency: U and its complement imply the sample product.
  // A reported (U, AUC) pair of (3144691, 0.65) corresponds to
  // n1*n2 = U / (1 - AUC) ~= 8.98e6 with AUC measured on the opposite side.
  const double implied = 3144691.0 / (1.0 - 0.65);
  CHECK(implied == doctest::Approx(8.98e6).epsilon(0.01));
  CHECK(auc_from_u(implied - 3144691.0, 2997, 2998) ==
        doctest::Approx(0.65).epsilon(0.01));
}

TEST_CASE("auc orders features exactly like U") {
  Rng rng(13);
  std::vector<double> us;
  for (int i = 0; i < 20; ++i) {
    us.push_back(static_cast<double>(rng.index(400)) / 2.0);
  }
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      const bool u_less = us[i] < us[j];
      const bool auc_less = auc_from_u(us[i], 20, 20) < auc_from_u(us[j], 20, 20);
      CHECK(u_less == auc_less);
    }
  }
}

TEST_CASE("bonferroni clamps and preserves order") {
  const std::vector<double> pvals = {0.001, 0.5, 0.0001};
  const auto adjusted = bonferroni(pvals, 85);
  REQUIRE(adjusted.size() == 3);
  CHECK(adjusted[0] == doctest::Approx(0.085));
  CHECK(adjusted[1] == doctest::Approx(1.0)); // clamped
  CHECK(adjusted[2] == doctest::Approx(0.0085));
  CHECK_THROWS_AS(bonferroni(pvals, 2), std::invalid_argument);
}

TEST_SUITE_END();
