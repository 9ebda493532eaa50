//
// Copyright 2026 The logad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "logad/embedding.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

#ifndef LOGAD_TEST_DATA_DIR
#error "LOGAD_TEST_DATA_DIR must be defined"
#endif

namespace logad {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::vector<double> RandomUnit(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double n = 0.0;
  for (double& x : v) {
    x = rng.normal();
    n += x * x;
  }
  for (double& x : v) x /= std::sqrt(n);
  return v;
}

TEST(CosineDistance, Examples) {
  const std::vector<double> v{0.3, -0.2, 0.9};
  EXPECT_NEAR(CosineDistance(v, v), 0.0, 1e-15);
  EXPECT_NEAR(CosineDistance(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0, 1e-15);
  EXPECT_NEAR(CosineDistance(std::vector<double>{1, 0}, std::vector<double>{-1, 0}), 2.0, 1e-15);
}

TEST(CosineDistance, ZeroVectorIsRejected) {
  EXPECT_EQ(CodeOf([] { CosineDistance(std::vector<double>{0, 0}, std::vector<double>{1, 0}); }),
            ErrorCode::kZeroVector);
}

TEST(NearestTemplate, ExactVectorHasZeroDistance) {
  EmbeddingStore store(3, "test");
  store.Insert(4, "a", {1, 0, 0});
  store.Insert(9, "b", {0, 1, 0});
  const auto m = NearestTemplate(std::vector<double>{0, 1, 0}, store, 0.5);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->template_id, 9);
  EXPECT_NEAR(m->distance, 0.0, 1e-15);
}

TEST(NearestTemplate, OrthogonalQueryIsNoMatch) {
  EmbeddingStore store(3, "test");
  store.Insert(0, "a", {1, 0, 0});
  store.Insert(1, "b", {0, 1, 0});
  EXPECT_FALSE(NearestTemplate(std::vector<double>{0, 0, 1}, store, 0.5));
}

TEST(NearestTemplate, EmptyStore) {
  EmbeddingStore store(3, "test");
  EXPECT_EQ(CodeOf([&] { NearestTemplate(std::vector<double>{0, 0, 1}, store, 0.5); }),
            ErrorCode::kEmptyStore);
}

TEST(NearestTemplate, AgreesWithExhaustiveScan) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingStore store(6, "test");
    for (TemplateId id = 0; id < 10; ++id) store.Insert(id, "t", RandomUnit(6, rng));
    const std::vector<double> q = RandomUnit(6, rng);
    TemplateId best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [id, e] : store.entries()) {
      const double d = CosineDistance(q, e.vector);
      if (d < best_d) {
        best_d = d;
        best = id;
      }
    }
    const auto m = NearestTemplate(q, store, 2.0);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->template_id, best);
    EXPECT_EQ(m->distance, best_d);
  }
}

TEST(NearestTemplate, TiesGoToLowestId) {
  EmbeddingStore store(2, "test");
  store.Insert(5, "a", {1, 0});
  store.Insert(2, "b", {1, 0});
  EXPECT_EQ(NearestTemplate(std::vector<double>{1, 0}, store, 0.1)->template_id, 2);
}

TEST(EmbedFallback, Deterministic) {
  const std::vector<std::string> t{"VM", "Creation", "took", "<*>", "seconds"};
  EXPECT_EQ(EmbedFallback(t, 32, 1), EmbedFallback(t, 32, 1));
  EXPECT_NE(EmbedFallback(t, 32, 1), EmbedFallback(t, 32, 2));
}

TEST(EmbedFallback, UnitLength) {
  const std::vector<std::string> t{"a", "b", "c"};
  double n = 0.0;
  for (double x : EmbedFallback(t, 16, 3)) n += x * x;
  EXPECT_NEAR(n, 1.0, 1e-12);
}

TEST(EmbedFallback, SingleTokenIsTokenVector) {
  const std::vector<std::string> one{"disk"};
  const std::vector<std::string> two{"disk", "disk"};
  const EmbeddingVector a = EmbedFallback(one, 16, 4);
  const EmbeddingVector b = EmbedFallback(two, 16, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(EmbedFallback, SharedTokensAreCloser) {
  Rng rng(21);
  auto word = [&] { return "w" + std::to_string(rng.next() % 1000000); };
  double near_sum = 0.0;
  double far_sum = 0.0;
  const int samples = 200;
  for (int i = 0; i < samples; ++i) {
    std::vector<std::string> base;
    for (int k = 0; k < 5; ++k) base.push_back(word());
    std::vector<std::string> one = base;
    one[rng.index(5)] = word();
    std::vector<std::string> disjoint;
    for (int k = 0; k < 5; ++k) disjoint.push_back(word());
    const auto e = EmbedFallback(base, 32, 9);
    near_sum += CosineDistance(e, EmbedFallback(one, 32, 9));
    far_sum += CosineDistance(e, EmbedFallback(disjoint, 32, 9));
  }
  EXPECT_LT(near_sum / samples, far_sum / samples);
}

TEST(EmbedFallback, OneTokenVariantFindsItsTemplate) {
  Rng rng(5);
  int hits = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    EmbeddingStore store(32, "fallback-hash-v1");
    std::vector<std::vector<std::string>> templates;
    for (TemplateId id = 0; id < 10; ++id) {
      std::vector<std::string> t;
      for (int k = 0; k < 6; ++k) t.push_back("t" + std::to_string(rng.next() % 100000));
      store.Insert(id, JoinTokens(t), EmbedFallback(t, 32, 1));
      templates.push_back(t);
    }
    const auto target = static_cast<TemplateId>(rng.index(10));
    std::vector<std::string> variant = templates[static_cast<std::size_t>(target)];
    variant[rng.index(variant.size())] = "zz" + std::to_string(trial);
    const auto m = NearestTemplate(EmbedFallback(variant, 32, 1), store, 2.0);
    if (m && m->template_id == target) ++hits;
  }
  EXPECT_EQ(hits, trials);
}

TEST(EmbeddingStore, InsertChecksDimAndFiniteness) {
  EmbeddingStore store(2, "test");
  EXPECT_EQ(CodeOf([&] { store.Insert(0, "a", {1, 2, 3}); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(CodeOf([&] { store.Insert(0, "a", {1, std::nan("")}); }), ErrorCode::kNumericError);
}

TEST(Logvec, RoundTrip) {
  EmbeddingStore store(3, "fallback-hash-v1", "abc");
  store.Insert(0, "a <*> b", {0.1, 1.0 / 3.0, -2e-17});
  store.Insert(7, "quote \" here", {1, 2, 3});
  EXPECT_EQ(DeserializeStore(SerializeStore(store)), store);
}

TEST(Logvec, EmptyStoreRoundTrip) {
  EmbeddingStore store(8, "bert-base-uncased", "h");
  EXPECT_EQ(DeserializeStore(SerializeStore(store)), store);
}

TEST(Logvec, RowDimMismatchIsFormatError) {
  const std::string text =
      "{\"format\":\"logvec-v1\",\"dim\":3,\"model\":\"m\",\"parser_hash\":\"\",\"count\":1}\n"
      "{\"template_id\":0,\"template\":\"a\",\"vector\":[1,2]}\n";
  EXPECT_EQ(CodeOf([&] { DeserializeStore(text); }), ErrorCode::kFormatError);
}

TEST(Logvec, CountMismatchIsFormatError) {
  const std::string text =
      "{\"format\":\"logvec-v1\",\"dim\":2,\"model\":\"m\",\"parser_hash\":\"\",\"count\":2}\n"
      "{\"template_id\":0,\"template\":\"a\",\"vector\":[1,2]}\n";
  EXPECT_EQ(CodeOf([&] { DeserializeStore(text); }), ErrorCode::kFormatError);
}

TEST(Logvec, ExtractorFileLoads) {
  const EmbeddingStore store =
      LoadStore(std::filesystem::path(LOGAD_TEST_DATA_DIR) / "extractor_output.logvec");
  EXPECT_EQ(store.dim(), 4u);
  EXPECT_EQ(store.size(), 3u);
  EXPECT_EQ(store.model_name(), "bert-base-uncased");
  EXPECT_EQ(store.parser_hash(), "9f2c1e77a0b34d15");
  EXPECT_EQ(store.at(2).template_text, "VM Fatal error <*>");
  const auto& finished = store.at(0).vector;
  EXPECT_LT(CosineDistance(finished, store.at(1).vector),
            CosineDistance(finished, store.at(2).vector));
}

TEST(Logvec, ExtractorHeaderWithNoRows) {
  const std::string text =
      "{\"format\": \"logvec-v1\", \"dim\": 768, \"model\": \"bert-base-uncased\", "
      "\"pooling\": \"mean-of-last-layer\", \"parser_hash\": \"x\", \"count\": 0}\n";
  const EmbeddingStore store = DeserializeStore(text);
  EXPECT_EQ(store.dim(), 768u);
  EXPECT_TRUE(store.empty());
}

}  // namespace
}  // namespace logad
