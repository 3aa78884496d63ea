#include <gtest/gtest.h>

#include <functional>

#include "molrl/chem.hpp"
#include "test_support.hpp"

namespace {

using namespace molrl;
using chem::ParseErrorKind;

ParseErrorKind parse_error_kind(const std::string& smiles) {
  try {
    chem::parse_smiles(smiles);
  } catch (const chem::ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << smiles << " parsed";
  return ParseErrorKind::UnexpectedToken;
}

TEST(Parser, ChainHasExpectedAtomsAndBonds) {
  const chem::MolGraph g = chem::parse_smiles("CCO");
  ASSERT_EQ(g.atom_count(), 3u);
  ASSERT_EQ(g.bond_count(), 2u);
  EXPECT_EQ(g.atom(2).element, chem::Element::O);
  EXPECT_TRUE(g.bond_between(0, 1).has_value());
  EXPECT_TRUE(g.bond_between(1, 2).has_value());
  EXPECT_FALSE(g.bond_between(0, 2).has_value());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_FALSE(g.in_ring(i));
}

TEST(Parser, RingClosureMarksAllAtoms) {
  const chem::MolGraph g = chem::parse_smiles("C1CC1");
  EXPECT_EQ(g.bond_count(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(g.in_ring(i));
}

TEST(Parser, BracketAtomFields) {
  const chem::MolGraph g = chem::parse_smiles("[NH4+]");
  ASSERT_EQ(g.atom_count(), 1u);
  EXPECT_EQ(g.atom(0).formal_charge, 1);
  EXPECT_EQ(g.atom(0).explicit_h, 4);
  EXPECT_TRUE(g.atom(0).bracket);
}

TEST(Parser, BranchesAndBondSymbols) {
  const chem::MolGraph g = chem::parse_smiles("CC(=O)C#N");
  EXPECT_EQ(g.bond(*g.bond_between(1, 2)).order, chem::BondOrder::Double);
  EXPECT_EQ(g.bond(*g.bond_between(3, 4)).order, chem::BondOrder::Triple);
  EXPECT_TRUE(g.bond_between(1, 3).has_value());
}

TEST(Parser, PercentRingLabels) {
  const chem::MolGraph g = chem::parse_smiles("C%12CCCCC%12");
  EXPECT_EQ(g.bond_count(), 6u);
  EXPECT_TRUE(g.in_ring(0));
}

TEST(Parser, DisconnectedComponents) {
  const chem::MolGraph g = chem::parse_smiles("[NH4+].[Cl-]");
  EXPECT_EQ(g.component_count(), 2u);
}

TEST(Parser, AnnotationsAreDroppedAndFlagged) {
  const chem::MolGraph g = chem::parse_smiles("[13CH3]/C=C/[C@@H](O)C");
  EXPECT_TRUE(g.discarded_annotations());
  EXPECT_FALSE(chem::parse_smiles("CC=CC").discarded_annotations());
}

TEST(Parser, ErrorKinds) {
  EXPECT_EQ(parse_error_kind("CC("), ParseErrorKind::UnbalancedBranch);
  EXPECT_EQ(parse_error_kind("CC)"), ParseErrorKind::UnbalancedBranch);
  EXPECT_EQ(parse_error_kind("C1CC"), ParseErrorKind::UnclosedRing);
  EXPECT_EQ(parse_error_kind("[Xe]"), ParseErrorKind::UnknownElement);
  EXPECT_EQ(parse_error_kind("Q"), ParseErrorKind::UnknownElement);
  EXPECT_EQ(parse_error_kind(""), ParseErrorKind::EmptyInput);
  EXPECT_EQ(parse_error_kind("   "), ParseErrorKind::EmptyInput);
  EXPECT_EQ(parse_error_kind("[CH3"), ParseErrorKind::MalformedBracket);
  EXPECT_EQ(parse_error_kind("[C++-]"), ParseErrorKind::MalformedBracket);
  EXPECT_EQ(parse_error_kind("C=="), ParseErrorKind::UnexpectedToken);
  EXPECT_EQ(parse_error_kind("cc"), ParseErrorKind::AromaticOutsideRing);
}

TEST(Parser, ErrorCarriesPosition) {
  try {
    chem::parse_smiles("CC[Xe]");
    FAIL();
  } catch (const chem::ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(Parser, FuzzedInputsOnlyRaiseParseErrors) {
  Rng rng(17);
  const std::string alphabet = "CNOSPFIBrcnosl()[]=#123456789%+-@H/\\.*: \x01\xff";
  std::size_t parsed = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t max_len = i % 100 == 0 ? 4096 : 40;
    const std::string input = test::random_string(rng, max_len, alphabet);
    try {
      const chem::MolGraph g = chem::parse_smiles(input);
      ++parsed;
      const chem::ValidationReport report = chem::validate_valence(g);
      if (report.valid && g.atom_count() <= 64) chem::canonical_form(g);
    } catch (const chem::ParseError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception for input '" << input << "': " << e.what();
    }
  }
  EXPECT_GT(parsed, 0u);
}

TEST(Parser, FuzzedRandomBytes) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string input(rng.below(4097), '\0');
    for (char& c : input) c = static_cast<char>(rng.below(256));
    try {
      chem::parse_smiles(input);
    } catch (const chem::ParseError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception: " << e.what();
    }
  }
}

TEST(Valence, HandAnnotatedOracle) {
  const auto entries = test::load_valence_oracle();
  ASSERT_EQ(entries.size(), 40u);
  std::size_t valid = 0;
  for (const auto& e : entries) {
    valid += e.valid;
    EXPECT_EQ(test::check_valence_entry(e), "") << e.smiles;
  }
  EXPECT_EQ(valid, 20u);
}

TEST(Valence, CarbonDioxide) {
  EXPECT_TRUE(chem::validate_valence(chem::parse_smiles("O=C=O")).valid);
}

TEST(Valence, PentavalentCarbonReportsCentralAtom) {
  const auto report = chem::validate_valence(chem::parse_smiles("C(C)(C)(C)(C)C"));
  ASSERT_FALSE(report.valid);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].atom, 0u);
  EXPECT_EQ(report.violations[0].observed, 5);
  EXPECT_EQ(report.violations[0].allowed, std::vector<int>{4});
}

TEST(Valence, AromaticSystems) {
  for (const char* s : {"c1ccccc1", "c1ccc2ccccc2c1", "c1ccoc1", "c1ccsc1", "c1cc[nH]c1", "c1ccc2[nH]ccc2c1",
                        "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "c1ccc(cc1)-c1ccccc1"}) {
    EXPECT_TRUE(chem::validate_valence(chem::parse_smiles(s)).valid) << s;
  }
  for (const char* s : {"c1cccc1", "c1ccc(C)(C)cc1", "c1ccnc1"}) {
    EXPECT_FALSE(chem::validate_valence(chem::parse_smiles(s)).valid) << s;
  }
}

TEST(Valence, ImplicitHydrogenUsesNextAllowedValence) {
  EXPECT_EQ(chem::default_implicit_hydrogens(chem::Element::C, 2), 2);
  EXPECT_EQ(chem::default_implicit_hydrogens(chem::Element::N, 1), 2);
  EXPECT_EQ(chem::default_implicit_hydrogens(chem::Element::S, 3), 1);
  EXPECT_EQ(chem::default_implicit_hydrogens(chem::Element::C, 5), 0);
}

// Atom v is on a cycle iff some incident edge can be removed while its
// endpoints stay connected.
std::vector<bool> brute_force_ring_atoms(const chem::MolGraph& g) {
  std::vector<bool> out(g.atom_count(), false);
  for (std::size_t skip = 0; skip < g.bond_count(); ++skip) {
    const chem::Bond& b = g.bond(skip);
    std::vector<bool> seen(g.atom_count(), false);
    std::vector<std::size_t> stack{b.begin};
    seen[b.begin] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (nb.bond == skip || seen[nb.atom]) continue;
        seen[nb.atom] = true;
        stack.push_back(nb.atom);
      }
    }
    if (seen[b.end]) out[b.begin] = out[b.end] = true;
  }
  return out;
}

TEST(RingMembership, MatchesBruteForceOnSmallGraphs) {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const chem::MolGraph g = test::random_molecule(rng, 3 + rng.below(10));
    if (g.atom_count() > 12) continue;
    EXPECT_EQ(g.ring_membership(), brute_force_ring_atoms(g));
  }
}

TEST(Graph, RejectsStructuralViolations) {
  std::vector<chem::Atom> atoms(2);
  EXPECT_THROW(chem::MolGraph::from_parts(atoms, {{0, 0, chem::BondOrder::Single}}), chem::InvalidGraph);
  EXPECT_THROW(chem::MolGraph::from_parts(atoms, {{0, 2, chem::BondOrder::Single}}), chem::InvalidGraph);
  EXPECT_THROW(chem::MolGraph::from_parts(atoms, {{0, 1, chem::BondOrder::Single}, {1, 0, chem::BondOrder::Double}}),
               chem::InvalidGraph);
}

TEST(Descriptors, Ethanol) {
  const chem::DescriptorVector d = chem::descriptor_vector(chem::parse_smiles("CCO"));
  EXPECT_EQ(d[0], 3);
  EXPECT_EQ(d[1], 0);
  EXPECT_EQ(d[2], 0);
  EXPECT_EQ(d[3], 0);
  EXPECT_EQ(d[4], 1);
  EXPECT_EQ(d[5], 0);
  EXPECT_NEAR(d[6], 2 * 12.011 + 15.999 + 6 * 1.008, 1e-9);
  EXPECT_EQ(d[7], 0);
}

TEST(Descriptors, ChargeRingsAndAromatics) {
  EXPECT_EQ(chem::descriptor_vector(chem::parse_smiles("[NH4+]"))[7], 1);
  const auto benzene = chem::descriptor_vector(chem::parse_smiles("c1ccccc1"));
  EXPECT_EQ(benzene[1], 1);
  EXPECT_EQ(benzene[2], 6);
  EXPECT_EQ(benzene[5], 0);
  EXPECT_EQ(chem::descriptor_vector(chem::parse_smiles("c1ccc2ccccc2c1"))[1], 2);
  EXPECT_EQ(chem::descriptor_vector(chem::parse_smiles("CC(=O)C#N"))[5], 2);
}

TEST(Descriptors, AcyclicInputsHaveNoRings) {
  Rng rng(3);
  for (const char* s : {"CCO", "CC(C)(C)C", "C=CC=C", "NCC(=O)O"}) {
    EXPECT_EQ(chem::descriptor_vector(chem::parse_smiles(s))[1], 0) << s;
  }
}

TEST(Descriptors, ConstantOverKekuleSpellings) {
  EXPECT_EQ(chem::descriptor_vector(chem::parse_smiles("c1ccccc1O")),
            chem::descriptor_vector(chem::parse_smiles("OC1=CC=CC=C1")));
}

}  // namespace
