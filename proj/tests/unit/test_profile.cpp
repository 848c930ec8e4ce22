#include <gtest/gtest.h>

#include "brandmatch/error.hpp"
#include "brandmatch/profile.hpp"
#include "generators.hpp"

using namespace brandmatch;

namespace {

ProfileRecord record(std::string id) {
  ProfileRecord r;
  r.owner_id = std::move(id);
  return r;
}

CategoryNode category(std::string name, std::vector<InstanceLeaf> leaves, std::vector<CategoryNode> children = {}) {
  return CategoryNode{std::move(name), std::move(children), std::move(leaves)};
}

ProfileTree tree(std::vector<CategoryNode> categories) {
  return ProfileTree("t", ProfileKind::user, CategoryNode{"", std::move(categories), {}});
}

std::vector<std::string> names(const std::vector<CategoryPath>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.to_string());
  return out;
}

}  // namespace

TEST(BuildProfile, GenderAndPostsAggregate) {
  auto r = record("u");
  r.gender = "f";
  r.posts = {"ciao", "mondo"};
  const auto t = build_profile(r);
  EXPECT_EQ(t.categories(), (std::vector<std::string>{"gender", "posts"}));
  const auto leaves = leaves_at(t, CategoryPath::parse("posts"));
  ASSERT_EQ(leaves.size(), 1u);
  const auto& doc = std::get<TextDocument>(leaves[0].value);
  EXPECT_EQ(doc.text, "ciao mondo");
  EXPECT_EQ(doc.tokens, (std::vector<std::string>{"ciao", "mondo"}));
  EXPECT_EQ(leaves[0].source, "posts aggregate (2 posts)");
}

TEST(BuildProfile, MinimalProfile) {
  auto r = record("u");
  r.gender = "m";
  const auto t = build_profile(r);
  EXPECT_EQ(t.categories(), (std::vector<std::string>{"gender"}));
  EXPECT_EQ(std::get<CategoricalToken>(leaves_at(t, CategoryPath::parse("gender"))[0].value).value, "m");
}

TEST(BuildProfile, EmptyRecordThrows) {
  try {
    build_profile(record("u"));
    FAIL() << "expected EmptyProfile";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_profile);
  }
}

TEST(BuildProfile, AllDefaultFields) {
  auto r = record("u");
  r.gender = "f";
  r.age = 30;
  r.education = "Laurea in  Economia";
  r.job = "Designer";
  r.location = "Palermo";  // not a default category
  r.posts = {"uno due"};
  const auto t = build_profile(r);
  EXPECT_EQ(t.categories(), (std::vector<std::string>{"gender", "age", "education", "job", "posts"}));
  EXPECT_EQ(std::get<NumericValue>(leaves_at(t, CategoryPath::parse("age"))[0].value), (NumericValue{30.0, "years"}));
  const auto edu = std::get<TextDocument>(leaves_at(t, CategoryPath::parse("education"))[0].value);
  EXPECT_EQ(edu.text, "Laurea in Economia");
  EXPECT_EQ(edu.tokens, (std::vector<std::string>{"laurea", "economia"}));
}

TEST(BuildProfile, ExtraKeysUnderExtraCategory) {
  auto r = record("u");
  r.gender = "f";
  r.extra = nlohmann::ordered_json::parse(R"({"Hobby": "Running", "pets": {"dogs": 2}})");
  const auto t = build_profile(r);
  EXPECT_EQ(t.categories(), (std::vector<std::string>{"gender", "extra"}));
  const auto hobby = leaves_at(t, CategoryPath::parse("extra/hobby"));
  ASSERT_EQ(hobby.size(), 1u);
  EXPECT_EQ(std::get<CategoricalToken>(hobby[0].value).value, "running");
  EXPECT_EQ(std::get<NumericValue>(leaves_at(t, CategoryPath::parse("extra/pets/dogs"))[0].value).value, 2.0);
}

TEST(BuildProfile, ConfiguredSchema) {
  const auto schema = ProfileSchema::from_json(nlohmann::json::parse(R"({
    "include_extra": false,
    "categories": [{"name": "topics", "field": "page_meta.topics"}, {"name": "hobby", "field": "extra.hobby"}]
  })"));
  ProfileBuilder builder(schema, TokenizerConfig::defaults());
  auto r = record("p");
  r.kind = ProfileKind::brand_page;
  r.page_meta = PageMeta{"Shop", std::nullopt, {"Bags", "Fashion"}, 10};
  r.extra = nlohmann::ordered_json::parse(R"({"hobby": "Sailing", "other": 1})");
  const auto t = builder.build(r);
  EXPECT_EQ(t.categories(), (std::vector<std::string>{"topics", "hobby"}));
  EXPECT_EQ(leaves_at(t, CategoryPath::parse("topics")).size(), 2u);
  EXPECT_THROW(ProfileSchema::from_json(nlohmann::json::parse(R"({"categories": [{"name": "x", "field": "shoe"}]})")),
               Error);
}

TEST(BuildProfile, Deterministic) {
  auto r = record("u");
  r.gender = "f";
  r.age = 22;
  r.posts = {"Borse e scarpe", "Moda milano"};
  EXPECT_EQ(build_profile(r), build_profile(r));
}

TEST(ProfileTree, Invariants) {
  const InstanceLeaf leaf{CategoricalToken{"x"}, ""};
  EXPECT_THROW(ProfileTree("t", ProfileKind::user, CategoryNode{"", {category("a", {leaf})}, {leaf}}), Error);
  EXPECT_THROW(tree({category("a", {leaf}), category("a", {leaf})}), Error);
  EXPECT_THROW(tree({category("A", {leaf})}), Error);
  EXPECT_THROW(tree({category("a", {})}), Error);
  EXPECT_THROW(tree({category("a", {{TextDocument{"", {}}, ""}})}), Error);
  EXPECT_THROW(tree({category("a", {{NumericValue{INFINITY, ""}, ""}})}), Error);
  EXPECT_THROW(tree({category("a", {leaf}, {category("b", {leaf}), category("b", {leaf})})}), Error);
  EXPECT_NO_THROW(tree({category("a", {leaf}, {category("b", {leaf})})}));
}

TEST(CategoryPath, ParseAndNormalize) {
  const auto p = CategoryPath::parse("Interests/Music");
  EXPECT_EQ(p.to_string(), "interests/music");
  EXPECT_EQ(p.depth(), 2u);
  EXPECT_EQ(CategoryPath::parse("interests").child("music"), p);
  EXPECT_THROW(CategoryPath::parse("a//b"), Error);
}

TEST(CommonCategories, Examples) {
  const InstanceLeaf leaf{CategoricalToken{"x"}, ""};
  const auto a = tree({category("gender", {leaf}), category("posts", {leaf})});
  const auto b = tree({category("posts", {leaf}), category("job", {leaf})});
  EXPECT_EQ(names(common_categories(a, b)), (std::vector<std::string>{"posts"}));
  EXPECT_EQ(names(common_categories(a, a)), (std::vector<std::string>{"gender", "posts"}));
  const auto c = tree({category("gender", {leaf})});
  const auto d = tree({category("job", {leaf})});
  EXPECT_TRUE(common_categories(c, d).empty());
}

TEST(CommonCategories, SymmetricSortedSubset) {
  gen::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto a = gen::random_tree(rng, "a", 5);
    const auto b = gen::random_tree(rng, "b", 5);
    const auto ab = common_categories(a, b);
    EXPECT_EQ(ab, common_categories(b, a));
    EXPECT_TRUE(std::is_sorted(ab.begin(), ab.end()));
    for (const auto& p : ab) {
      EXPECT_NE(a.find(p), nullptr);
      EXPECT_NE(b.find(p), nullptr);
    }
  }
}

TEST(LeavesAt, Examples) {
  const InstanceLeaf l{TextDocument{"ciao", {"ciao"}}, "posts aggregate"};
  const InstanceLeaf m1{CategoricalToken{"rock"}, "m"};
  const InstanceLeaf s1{CategoricalToken{"tennis"}, "s"};
  const auto t = tree({category("interests", {}, {category("music", {m1}), category("sport", {s1})}),
                       category("posts", {l})});
  EXPECT_EQ(leaves_at(t, CategoryPath::parse("posts")), (std::vector<InstanceLeaf>{l}));
  EXPECT_TRUE(leaves_at(t, CategoryPath::parse("job")).empty());
  EXPECT_TRUE(leaves_at(t, CategoryPath::parse("posts/deep")).empty());
  EXPECT_EQ(leaves_at(t, CategoryPath::parse("interests")), (std::vector<InstanceLeaf>{m1, s1}));
}
