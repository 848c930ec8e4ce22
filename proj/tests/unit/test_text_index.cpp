#include <gtest/gtest.h>

#include <cmath>

#include "brandmatch/error.hpp"
#include "brandmatch/text_index.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace brandmatch;

namespace {

Document doc(std::vector<std::string> tokens) { return {"d", std::move(tokens)}; }

std::vector<Document> docs(const oracle::Corpus& corpus) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) out.push_back({"d" + std::to_string(i), corpus[i]});
  return out;
}

CorpusIndex corpus_with(std::size_t m, std::unordered_map<std::string, std::size_t> df) {
  return CorpusIndex::from_counts(m, std::move(df));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;
}

}  // namespace

TEST(Tf, Examples) {
  EXPECT_DOUBLE_EQ(tf("a", doc({"a", "b", "a"})), 2.0 / 3.0);
  EXPECT_EQ(tf("z", doc({"a", "b", "a"})), 0.0);
  EXPECT_EQ(tf("a", doc({"a"})), 1.0);
}

TEST(Tf, EmptyDocumentThrows) {
  EXPECT_EQ(code_of([] { tf("a", doc({})); }), Errc::empty_document);
}

TEST(Tf, LiteralModeUsesCodePointLength) {
  EXPECT_DOUBLE_EQ(tf("abc", doc({"abc", "x", "abc", "y"}), TfMode::literal), 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(tf("\xC3\xA8\xC3\xA8", doc({"\xC3\xA8\xC3\xA8", "y"}), TfMode::literal), 2.0 / 2.0);
  EXPECT_EQ(tf("zz", doc({"abc"}), TfMode::literal), 0.0);
  EXPECT_EQ(parse_tf_mode("literal"), TfMode::literal);
  EXPECT_THROW(parse_tf_mode("bogus"), Error);
}

TEST(Idf, Examples) {
  EXPECT_NEAR(idf("t", corpus_with(4, {{"t", 1}})), 1.386294, 1e-6);
  EXPECT_EQ(idf("t", corpus_with(7, {{"t", 7}})), 0.0);
  EXPECT_EQ(idf("t", corpus_with(1, {{"t", 1}})), 0.0);
}

TEST(Idf, UnseenTermTreatedAsDfOne) {
  EXPECT_DOUBLE_EQ(idf("new", corpus_with(5, {{"t", 2}})), std::log(5.0));
}

TEST(Idf, MonotoneInDf) {
  for (std::size_t m = 2; m <= 30; ++m) {
    for (std::size_t d = 1; d < m; ++d) {
      EXPECT_GT(idf("t", corpus_with(m, {{"t", d}})), idf("t", corpus_with(m, {{"t", d + 1}})));
    }
  }
}

TEST(CorpusIndex, BuildCountsDocumentsNotOccurrences) {
  const std::vector<Document> d = {doc({"a", "a", "b"}), doc({"a"}), doc({"c"})};
  const auto c = CorpusIndex::build(d);
  EXPECT_EQ(c.document_count(), 3u);
  EXPECT_EQ(c.df("a"), 2u);
  EXPECT_EQ(c.df("b"), 1u);
  EXPECT_EQ(c.df("z"), 0u);
  EXPECT_EQ(c.vocabulary(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(CorpusIndex, Errors) {
  EXPECT_EQ(code_of([] { CorpusIndex::build(std::vector<Document>{}); }), Errc::empty_corpus);
  EXPECT_EQ(code_of([] { CorpusIndex::build(std::vector<Document>{doc({"a"}), doc({})}); }), Errc::empty_document);
  EXPECT_THROW(CorpusIndex::from_counts(2, {{"a", 3}}), Error);
  EXPECT_THROW(CorpusIndex::from_counts(2, {{"a", 0}}), Error);
  EXPECT_THROW(CorpusIndex::from_counts(0, {}), Error);
}

TEST(CorpusIndex, JsonRoundTrip) {
  const std::vector<Document> d = {doc({"x", "y"}), doc({"y"})};
  const auto c = CorpusIndex::build(d);
  const auto j = c.to_json();
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["df"]["y"], 2);
  EXPECT_EQ(CorpusIndex::from_json(j), c);
}

TEST(TfidfVector, Examples) {
  const std::vector<Document> d = {doc({"a", "b", "a"}), doc({"a"})};
  const auto c = CorpusIndex::build(d);
  const auto v = tfidf_vector(d[0], c);
  EXPECT_EQ(v.weight("a"), 0.0);
  EXPECT_EQ(v.size(), 1u);  // "a" annihilated by idf = 0

  const auto v2 = tfidf_vector(doc({"a"}), corpus_with(4, {{"a", 1}}));
  EXPECT_NEAR(v2.weight("a"), 1.386294, 1e-6);

  EXPECT_EQ(tfidf_vector(doc({"q", "r"}), c), tfidf_vector(doc({"q", "r"}), c));
}

TEST(TfidfVector, EmptyDocumentThrows) {
  const auto c = corpus_with(2, {{"a", 1}});
  EXPECT_EQ(code_of([&] { tfidf_vector(doc({}), c); }), Errc::empty_document);
}

TEST(WeightedVector, Invariants) {
  const WeightedVector v({{"b", 2.0}, {"a", 0.0}, {"c", 1.0}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.entries()[0].first, "b");
  EXPECT_THROW(WeightedVector({{"a", -1.0}}), Error);
  EXPECT_THROW(WeightedVector({{"a", NAN}}), Error);
  EXPECT_THROW(WeightedVector({{"a", INFINITY}}), Error);
  EXPECT_THROW(WeightedVector({{"a", 1.0}, {"a", 2.0}}), Error);
}

TEST(Cosine, Examples) {
  const WeightedVector v({{"a", 0.3}, {"b", 1.7}});
  EXPECT_EQ(cosine(v, v), 1.0);
  EXPECT_EQ(cosine(WeightedVector({{"a", 1.0}}), WeightedVector({{"b", 1.0}})), 0.0);
  EXPECT_NEAR(cosine(WeightedVector({{"a", 1.0}}), WeightedVector({{"a", 1.0}, {"b", 1.0}})), 0.707107, 1e-6);
  EXPECT_EQ(cosine(WeightedVector(), v), 0.0);
  EXPECT_EQ(cosine(WeightedVector(), WeightedVector()), 0.0);
}

TEST(OracleAgreement, TfIdfTfidfCosine) {
  gen::Rng rng(20240601);
  for (int round = 0; round < 300; ++round) {
    const auto corpus = gen::random_corpus(rng);
    const auto index = CorpusIndex::build(docs(corpus));
    const auto& q1 = corpus[gen::pick(rng, 0, corpus.size() - 1)];
    const auto q2 = gen::random_doc(rng, gen::vocabulary(25));  // may contain unseen terms
    for (const auto* q : {&q1, &q2}) {
      for (const auto& t : *q) {
        ASSERT_NEAR(tf(t, doc(*q)), oracle::tf(t, *q), 1e-12);
        ASSERT_NEAR(tf(t, doc(*q), TfMode::literal), oracle::tf(t, *q, true), 1e-12);
        ASSERT_NEAR(idf(t, index), oracle::idf(t, corpus), 1e-12);
      }
      const auto v = tfidf_vector(doc(*q), index);
      const auto o = oracle::tfidf(*q, corpus);
      ASSERT_EQ(v.size(), o.size());
      for (const auto& [term, w] : o) ASSERT_NEAR(v.weight(term), w, 1e-9);
    }
    const double c = cosine(tfidf_vector(doc(q1), index), tfidf_vector(doc(q2), index));
    ASSERT_NEAR(c, oracle::cosine(oracle::tfidf(q1, corpus), oracle::tfidf(q2, corpus)), 1e-9);
  }
}

TEST(CosineProperties, SymmetryBoundsScaling) {
  gen::Rng rng(7);
  const auto vocab = gen::vocabulary(30);
  auto random_vector = [&] {
    std::map<std::string, double> m;
    for (std::size_t i = gen::pick(rng, 0, 12); i > 0; --i) {
      m[vocab[gen::pick(rng, 0, vocab.size() - 1)]] = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    }
    return WeightedVector(std::vector<WeightedVector::Entry>(m.begin(), m.end()));
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_vector();
    const auto b = random_vector();
    const double ab = cosine(a, b);
    EXPECT_NEAR(ab, cosine(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    const double c = std::uniform_real_distribution<double>(0.01, 100.0)(rng);
    EXPECT_NEAR(cosine(a.scaled(c), b), ab, 1e-12);
    if (!a.empty()) {
      EXPECT_EQ(cosine(a, a), 1.0);
    }
  }
}

TEST(LogBase, RescalesIdfUniformly) {
  const auto c = corpus_with(10, {{"a", 1}, {"b", 4}});
  Weighting w10;
  w10.log_base = 10.0;
  EXPECT_NEAR(idf("a", c, w10), std::log10(10.0), 1e-15);
  EXPECT_NEAR(idf("b", c, w10) / idf("b", c), 1.0 / std::log(10.0), 1e-12);
}
