#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "typel/constructions.hpp"
#include "typel/errors.hpp"
#include "typel/exterior_algebra.hpp"
#include "typel/group.hpp"
#include "typel/random.hpp"

using namespace typel;

namespace {

// Projective equality up to a unit scalar, entrywise after fixing the scale
// on the largest entry of b.
double projective_gap(const CMatrix& a, const CMatrix& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Complex s = a(r, c) / b(r, c);
  return max_abs(CMatrix(a - s * b)) / max_abs(a);
}

GroupSpec random_free_group(Rng& rng, int n, int k) {
  std::vector<CMatrix> gens;
  for (int i = 0; i < k; ++i) gens.push_back(rng.complex_gaussian_matrix(2 * n + 2, 2 * n + 2));
  return make_group_spec(n, gens);
}

}  // namespace

TEST_CASE("normalize") {
  CHECK(max_abs(CMatrix(normalize(2.0 * CMatrix::Identity(4, 4)).rep() - CMatrix::Identity(4, 4))) == 0.0);
  const double a = 2.0;
  const CMatrix d = Eigen::Vector4cd(a * a, 1, 1 / (a * a), 1).asDiagonal();
  CHECK(max_abs(CMatrix(normalize(d).rep() - d / 4.0)) < 1e-16);

  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const CMatrix M = rng.complex_gaussian_matrix(4, 4);
    const Complex phase = std::polar(1.0, rng.uniform(0, 6.28));
    const ProjectiveMap g = normalize(M), h = normalize(phase * 3.0 * M);
    CHECK(max_abs(CMatrix(g.rep() - h.rep())) < 1e-14);
    CHECK(max_abs(g.rep()) == doctest::Approx(1.0));
    // the determinant-one representative
    CHECK(std::abs(g.sl_rep().determinant()) == doctest::Approx(1.0).epsilon(1e-12));
    // blocks tile rep
    CHECK(max_abs(CMatrix(block_matrix(g.block_a(), g.block_b(), g.block_c(), g.block_d()) - g.rep())) == 0.0);
  }
  CMatrix s = rng.complex_gaussian_matrix(4, 4);
  s.row(3) = s.row(0);
  CHECK_THROWS_AS(ProjectiveMap::from_matrix(s), NotGroupElementError);
  CHECK_THROWS_AS(ProjectiveMap::from_matrix(CMatrix::Identity(3, 3)), UsageError);
}

TEST_CASE("words") {
  CHECK(reduce_word({1, 2, -2, -1, 1}) == Word{1});
  CHECK(inverse_word({1, -2, 3}) == Word{-3, 2, -1});
  CHECK(concat_words({1, 2}, {-2, 3}) == Word{1, 3});
  CHECK(word_to_string({}) == "1");
  CHECK(word_to_string({1, -2, 1}, {"a", "b"}) == "a b^-1 a");
}

TEST_CASE("products, inverses and the homomorphism property") {
  Rng rng(32);
  const GroupSpec spec = random_free_group(rng, 1, 2);
  for (int t = 0; t < 30; ++t) {
    Word w1, w2;
    for (int k = 0; k < 1 + t % 5; ++k) w1.push_back((rng.next() % 2 ? 1 : -1) * static_cast<int>(1 + rng.next() % 2));
    for (int k = 0; k < 1 + t % 4; ++k) w2.push_back((rng.next() % 2 ? 1 : -1) * static_cast<int>(1 + rng.next() % 2));
    w1 = reduce_word(w1);
    w2 = reduce_word(w2);
    const ProjectiveMap g1 = evaluate_word(spec, w1), g2 = evaluate_word(spec, w2);
    const ProjectiveMap prod = g1 * g2;
    const ProjectiveMap direct = evaluate_word(spec, concat_words(w1, w2));
    CHECK(prod.word() == concat_words(w1, w2));
    CHECK(max_abs(CMatrix(prod.rep() - direct.rep())) <= 1e-9);
    // oracle: plain matrix product of the raw generators
    CMatrix raw = CMatrix::Identity(4, 4);
    for (int letter : concat_words(w1, w2)) {
      const CMatrix& m = spec.generators[static_cast<std::size_t>(std::abs(letter) - 1)].map.rep();
      raw = raw * (letter > 0 ? m : CMatrix(m.inverse()));
    }
    CHECK(projective_gap(prod.rep(), raw) <= 1e-9);
    CHECK((g1 * g1.inverse()).is_identity(1e-9));
    // the tracked scale gives a determinant-one representative
    CHECK(std::abs(prod.sl_rep().determinant()) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("carried compounds match compounds of the product") {
  Rng rng(33);
  const GroupSpec spec = random_free_group(rng, 1, 2);
  const ProjectiveMap g = evaluate_word(spec, {1, -2, 2, 2, -1, 1}, true);
  REQUIRE(g.compound().has_value());
  CHECK(projective_gap(*g.compound(), oracle::compound(g.rep())) <= 1e-9);
  const ProjectiveMap gi = g.inverse();
  REQUIRE(gi.compound().has_value());
  CHECK(projective_gap(*gi.compound(), oracle::compound(gi.rep())) <= 1e-9);
}

TEST_CASE("enumerate_words") {
  Rng rng(34);
  const GroupSpec cyc = random_free_group(rng, 1, 1);
  const WordList c3 = enumerate_words(cyc, 3);
  std::set<Word> got;
  for (const auto& g : c3.elements) got.insert(g.word());
  CHECK(got == std::set<Word>{{}, {1}, {-1}, {1, 1}, {-1, -1}, {1, 1, 1}, {-1, -1, -1}});
  CHECK(c3.elements.size() == 7);

  const GroupSpec two = random_free_group(rng, 1, 2);
  CHECK(enumerate_words(two, 2).elements.size() == 17);
  CHECK(count_reduced_words(2, 2) == 17);

  for (int L = 0; L <= 5; ++L) {
    const auto ref = oracle::reduced_words(2, L);
    const WordList list = enumerate_words(two, L);
    std::set<Word> seen;
    int previous_length = 0;
    for (const auto& g : list.elements) {
      CHECK(seen.insert(g.word()).second);
      CHECK(static_cast<int>(g.word().size()) >= previous_length);
      previous_length = static_cast<int>(g.word().size());
    }
    CHECK(seen == std::set<Word>(ref.begin(), ref.end()));
    CHECK(count_reduced_words(2, L) == ref.size());
  }

  // free product <a> * <b> of two infinite cyclic factors
  GroupSpec fp = two;
  fp.structure = GroupStructure::FreeProduct;
  fp.factor_sizes = {1, 1};
  for (const auto& g : enumerate_words(fp, 2).elements) {
    const Word& w = g.word();
    CHECK(reduce_word(w) == w);
  }
  CHECK(syllables(fp, {1, 1, -2, 1}) == std::vector<Word>{{1, 1}, {-2}, {1}});

  EnumerationOptions small;
  small.budget = 10;
  CHECK_THROWS_AS(enumerate_words(two, 4, small), EnumerationCapError);
  small.allow_partial = true;
  const WordList partial = enumerate_words(two, 4, small);
  CHECK(partial.partial);
  CHECK(partial.elements.size() <= 10);
}

TEST_CASE("C block norms") {
  CMatrix m = CMatrix::Identity(4, 4);
  m.block(2, 0, 2, 2) = CMatrix::Identity(2, 2);
  CHECK(c_inverse_norm(ProjectiveMap::from_matrix(m)) == doctest::Approx(1.0));
  m.block(2, 0, 2, 2) = Eigen::Vector2cd(2.0, 0.5).asDiagonal();
  CHECK(c_inverse_norm(ProjectiveMap::from_matrix(m)) == doctest::Approx(2.0));

  const Mobius g(Complex(1.0, 0.5), 2.0, Complex(0.3, -0.7), 1.0);
  CHECK(c_inverse_norm(segre_rep(g)) == doctest::Approx(1.0 / std::abs(g.c())).epsilon(1e-12));

  CHECK_THROWS_AS(c_inverse_norm(ProjectiveMap::identity(1)), UsageError);
  const ProjectiveMap diag = ProjectiveMap::from_matrix(Eigen::Vector4cd(2, 3, 0.5, 1.0 / 3).asDiagonal());
  CHECK(std::isinf(c_inverse_norm(diag)));
  CHECK(std::isinf(a_c_inverse_norm(diag)));
}

TEST_CASE("finite order detection") {
  const Complex w = std::polar(1.0, 2 * M_PI / 3);
  const ProjectiveMap rot = ProjectiveMap::from_matrix(Eigen::Vector4cd(w, 1, w * w, 1).asDiagonal());
  CHECK(finite_order(rot) == 3);
  Rng rng(35);
  const GroupSpec spec = make_group_spec(1, {rot.rep(), rng.complex_gaussian_matrix(4, 4)});
  CHECK(torsion_generators(spec) == std::vector<int>{0});
}
