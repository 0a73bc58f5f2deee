#include <gtest/gtest.h>

#include "rdetect/protocol.hpp"
#include "rdetect/robust_detect.hpp"

using namespace rdetect;

namespace {

std::vector<SpeciesDecl> decls(std::initializer_list<const char*> names) {
  std::vector<SpeciesDecl> out;
  for (auto n : names) out.push_back({n, Output::nondetect, std::nullopt});
  return out;
}

std::vector<std::string> names_of(const Protocol& p, const std::vector<SpeciesId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(p.species(id).name);
  return out;
}

}  // namespace

TEST(MakeProtocol, SingleReactionIsEnteredInBothOrders) {
  const auto p = make_protocol(decls({"A", "B", "C", "D"}),
                               std::vector<ReactionDecl>{{{"A", "B"}, {"C", "D"}}});
  const auto A = p.id_of("A"), B = p.id_of("B"), C = p.id_of("C"), D = p.id_of("D");
  EXPECT_EQ(p.apply(A, B), (SpeciesPair{C, D}));
  EXPECT_EQ(p.apply(B, A), (SpeciesPair{D, C}));
  EXPECT_FALSE(p.apply(A, A).has_value());
  EXPECT_EQ(p.ordered_rule_count(), 2u);
  EXPECT_EQ(p.canonical_rules().size(), 1u);
}

TEST(MakeProtocol, RejectsInconsistentSymmetricEntries) {
  EXPECT_THROW(make_protocol(decls({"A", "B", "C", "D"}),
                             std::vector<ReactionDecl>{{{"A", "B"}, {"C", "D"}},
                                                       {{"B", "A"}, {"B", "A"}}}),
               ProtocolError);
}

TEST(MakeProtocol, AcceptsConsistentRestatement) {
  const auto p = make_protocol(decls({"A", "B", "C", "D"}),
                               std::vector<ReactionDecl>{{{"A", "B"}, {"C", "D"}},
                                                         {{"B", "A"}, {"D", "C"}}});
  EXPECT_EQ(p.canonical_rules().size(), 1u);
}

TEST(MakeProtocol, RejectsDuplicateAndUndeclaredSpecies) {
  EXPECT_THROW(make_protocol(decls({"A", "A"}), std::vector<ReactionDecl>{}), ProtocolError);
  EXPECT_THROW(make_protocol(decls({"A", "B"}),
                             std::vector<ReactionDecl>{{{"A", "B"}, {"A", "Z"}}}),
               ProtocolError);
  EXPECT_THROW(make_protocol(decls({"1bad"}), std::vector<ReactionDecl>{}), ProtocolError);
}

TEST(MakeProtocol, SelfPairWithDistinctProducts) {
  const auto p = make_protocol(decls({"L", "A", "B"}),
                               std::vector<ReactionDecl>{{{"L", "L"}, {"A", "B"}}});
  EXPECT_EQ(p.apply(p.id_of("L"), p.id_of("L")), (SpeciesPair{p.id_of("A"), p.id_of("B")}));
}

TEST(ClassifyCatalytic, PaperExamples) {
  const auto p = make_protocol(decls({"A", "B", "C", "D"}),
                               std::vector<ReactionDecl>{{{"A", "C"}, {"B", "C"}},
                                                         {{"A", "B"}, {"A", "D"}}});
  const auto part = classify_catalytic(p);
  EXPECT_EQ(names_of(p, part.catalytic), std::vector<std::string>{"C"});
  EXPECT_EQ(names_of(p, part.non_catalytic), (std::vector<std::string>{"A", "B", "D"}));

  const auto q = make_protocol(decls({"L", "A", "B"}),
                               std::vector<ReactionDecl>{{{"L", "L"}, {"A", "B"}}});
  EXPECT_FALSE(classify_catalytic(q).is_catalytic(q.id_of("L")));

  const auto rd = build_robust_detect(14);
  const auto rd_part = classify_catalytic(rd);
  EXPECT_EQ(names_of(rd, rd_part.catalytic), std::vector<std::string>{"D"});
  EXPECT_EQ(rd_part.non_catalytic.size(), 15u);
}

TEST(ClassifyCatalytic, PartitionsAndCatalystsSurviveEveryPair) {
  for (int s : {1, 2, 5, 9}) {
    const auto p = build_robust_detect(s);
    const auto part = classify_catalytic(p);
    EXPECT_EQ(part.catalytic.size() + part.non_catalytic.size(), p.species_count());
    for (SpeciesId a = 0; a < p.species_count(); ++a) {
      for (SpeciesId b = 0; b < p.species_count(); ++b) {
        const auto prod = p.apply(a, b);
        if (!prod) continue;
        for (auto c : part.catalytic) {
          const int in = (a == c) + (b == c);
          const int out = ((*prod)[0] == c) + ((*prod)[1] == c);
          EXPECT_EQ(in, out);
        }
      }
    }
  }
}

TEST(Apply, IsDeterministic) {
  const auto p = build_robust_detect(6);
  for (SpeciesId a = 0; a < p.species_count(); ++a)
    for (SpeciesId b = 0; b < p.species_count(); ++b) EXPECT_EQ(p.apply(a, b), p.apply(a, b));
}
