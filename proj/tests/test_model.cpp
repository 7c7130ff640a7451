#include <gtest/gtest.h>

#include "nrcs/model.hpp"
#include "nrcs/sampling.hpp"
#include "support.hpp"

using namespace nrcs;
using nrcs::testing::col;
using nrcs::testing::kron_oracle;
using nrcs::testing::lumped_oracle;
using nrcs::testing::random_edges;
using nrcs::testing::random_matrix;
using nrcs::testing::row;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

SubsystemDynamics double_integrator_siso() {
  return {(Matrix(2, 2) << 0, 1, 0, 0).finished(), col({0, 1}), row({1, 0})};
}

SubsystemDynamics msd_triple() {
  return {(Matrix(2, 2) << 0, 1, 0, 0).finished(), (Matrix(2, 2) << 0, 0, 1, 1).finished(),
          Matrix::Identity(2, 2)};
}

}  // namespace

TEST(Kron, MatchesElementwiseOracle) {
  RandomSource rng(31);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = random_matrix(rng, rng.uniform_int(1, 4), rng.uniform_int(1, 4));
    const Matrix b = random_matrix(rng, rng.uniform_int(1, 4), rng.uniform_int(1, 4));
    EXPECT_EQ(kron(a, b), kron_oracle(a, b));
  }
}

TEST(Fashion, ParseAndPrint) {
  for (Fashion f : {Fashion::kSiso, Fashion::kEquallyWeighted, Fashion::kMultiWeighted}) {
    EXPECT_EQ(parse_fashion(to_string(f)), f);
  }
  EXPECT_THROW(parse_fashion("bogus"), Error);
}

TEST(Fashion, SisoNeedsOneChannel) {
  EXPECT_THROW(check_fashion(Fashion::kSiso, 2), Error);
  EXPECT_NO_THROW(check_fashion(Fashion::kMultiWeighted, 2));
}

TEST(Topology, DriversSortedAndRequired) {
  const NetworkTopology t(DiGraph(3, {}), {3, 1, 3});
  EXPECT_EQ(t.drivers, (VertexSet{1, 3}));
  EXPECT_THROW(NetworkTopology(DiGraph(3, {}), {}), Error);
  EXPECT_THROW(NetworkTopology(DiGraph(3, {}), {4}), Error);
  const Matrix delta = t.selector();
  EXPECT_EQ(delta, (Matrix(3, 2) << 1, 0, 0, 0, 0, 1).finished());
}

TEST(Laplacian, SingleEdge) {
  const NetworkTopology t(DiGraph(2, {{1, 2}}), {1});
  EXPECT_EQ(laplacian_from_weights(t, {{{1, 2}, 3.0}}), (Matrix(2, 2) << 0, 0, -3, 3).finished());
}

TEST(Laplacian, ZeroWeights) {
  const NetworkTopology t(DiGraph(3, {{1, 2}, {2, 3}}), {1});
  EXPECT_EQ(laplacian_from_weights(t, {}), Matrix::Zero(3, 3));
}

TEST(Laplacian, CompletePair) {
  const double a = 1.5, b = -0.25;
  const NetworkTopology t(DiGraph(2, {{1, 2}, {2, 1}}), {1});
  EXPECT_EQ(laplacian_from_weights(t, {{{1, 2}, a}, {{2, 1}, b}}), (Matrix(2, 2) << b, -b, -a, a).finished());
}

TEST(Laplacian, NonEdgeRejected) {
  const NetworkTopology t(DiGraph(2, {{1, 2}}), {1});
  EXPECT_THROW(laplacian_from_weights(t, {{{2, 1}, 1.0}}), Error);
}

TEST(Laplacian, RowSumsAndSigns) {
  RandomSource rng(32);
  for (int t = 0; t < 1000; ++t) {
    const int N = rng.uniform_int(1, 8);
    const DiGraph g(N, random_edges(rng, N, 0.4));
    Vector w(g.edge_count());
    for (int k = 0; k < w.size(); ++k) w(k) = 4.0 * rng.uniform_signed();
    const Matrix L = laplacian(g, w);
    ASSERT_LT(max_abs(L.rowwise().sum()), 1e-12);
    for (int k = 0; k < g.edge_count(); ++k) {
      const auto [i, j] = g.edges()[k];
      EXPECT_EQ(L(j - 1, i - 1), -w(k));
    }
  }
}

TEST(Assemble, SingleVertexIsSubsystem) {
  const SubsystemDynamics sub = msd_triple();
  const NetworkTopology t(DiGraph(1, {}), {1});
  const LumpedSystem sys = assemble_lumped(sub, t, Fashion::kMultiWeighted,
                                           WeightAssignment::zeros(t.graph, Fashion::kMultiWeighted, 2));
  EXPECT_EQ(sys.A_sys, sub.A);
  EXPECT_EQ(sys.B_sys, sub.B);
}

TEST(Assemble, TwoVertexSisoByHand) {
  const SubsystemDynamics sub = double_integrator_siso();
  const double p = 0.7;
  const NetworkTopology t(DiGraph(2, {{1, 2}}), {1});
  const LumpedSystem sys = assemble_lumped(sub, t, Fashion::kSiso, {Fashion::kSiso, {col({p})}});
  // bc = [[0,0],[1,0]]
  const Matrix expected_A = (Matrix(4, 4) << 0, 1, 0, 0,  //
                             0, 0, 0, 0,                  //
                             0, 0, 0, 1,                  //
                             p, 0, -p, 0)
                                .finished();
  EXPECT_EQ(sys.A_sys, expected_A);
  EXPECT_EQ(sys.B_sys, col({0, 1, 0, 0}));
}

TEST(Assemble, MassSpringDamperPairMatchesPhysics) {
  // Unit masses, springs and dampers between the two masses:
  // x1' = v1, v1' = -(x1-x2) - (v1-v2) + u1, x2' = v2, v2' = -(x2-x1) - (v2-v1)
  const Model model = example_model(ExampleName::kMsd, 2);
  const LumpedSystem sys = assemble_lumped(model.sub, model.topo, model.fashion, *model.weights);
  const Matrix expected_A = (Matrix(4, 4) << 0, 1, 0, 0,  //
                             -1, -1, 1, 1,                //
                             0, 0, 0, 1,                  //
                             1, 1, -1, -1)
                                .finished();
  const Matrix expected_B = (Matrix(4, 2) << 0, 0, 1, 1, 0, 0, 0, 0).finished();
  EXPECT_LT(max_abs(sys.A_sys - expected_A), 1e-15);
  EXPECT_EQ(sys.B_sys, expected_B);
}

TEST(Assemble, MatchesBlockOracleOnRandomModels) {
  RandomSource rng(33);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 3);
    const int r = rng.uniform_int(1, 2);
    const int N = rng.uniform_int(1, 5);
    const SubsystemDynamics sub{random_matrix(rng, n, n), random_matrix(rng, n, r), random_matrix(rng, r, n)};
    const DiGraph g(N, random_edges(rng, N, 0.5));
    VertexSet drivers{rng.uniform_int(1, N)};
    if (N > 1 && rng.unit() < 0.5) drivers.push_back(drivers[0] % N + 1);
    const NetworkTopology topo(g, drivers);
    const Fashion f = r == 1 ? Fashion::kSiso : (t % 2 ? Fashion::kMultiWeighted : Fashion::kEquallyWeighted);
    const WeightAssignment w = sample_random_weights(g, f, r, rng);
    const LumpedSystem sys = assemble_lumped(sub, topo, f, w);
    const auto [A, B] = lumped_oracle(sub, N, g.edges(), topo.drivers, w.channels);
    EXPECT_LT(max_abs(sys.A_sys - A), 1e-12) << "model " << t;
    EXPECT_LT(max_abs(sys.B_sys - B), 1e-12) << "model " << t;
  }
}

TEST(Assemble, EqualMatchesMultiWithCoincidentChannels) {
  RandomSource rng(34);
  for (int t = 0; t < 50; ++t) {
    const int N = rng.uniform_int(2, 5);
    const SubsystemDynamics sub{random_matrix(rng, 2, 2), random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)};
    const NetworkTopology topo(DiGraph(N, random_edges(rng, N, 0.5)), {1});
    const WeightAssignment eq = sample_random_weights(topo.graph, Fashion::kEquallyWeighted, 2, rng);
    const WeightAssignment multi{Fashion::kMultiWeighted, {eq.channels[0], eq.channels[0]}};
    const LumpedSystem a = assemble_lumped(sub, topo, Fashion::kEquallyWeighted, eq);
    const LumpedSystem b = assemble_lumped(sub, topo, Fashion::kMultiWeighted, multi);
    EXPECT_LT(max_abs(a.A_sys - b.A_sys), 1e-12);
    EXPECT_EQ(a.B_sys, b.B_sys);
  }
}

TEST(Assemble, RejectsMismatchedWeights) {
  const SubsystemDynamics sub = double_integrator_siso();
  const NetworkTopology t(DiGraph(2, {{1, 2}}), {1});
  EXPECT_THROW(assemble_lumped(sub, t, Fashion::kSiso, {Fashion::kSiso, {col({1, 2})}}), Error);
  EXPECT_THROW(assemble_lumped(sub, t, Fashion::kSiso, {Fashion::kEquallyWeighted, {col({1})}}), Error);
}

TEST(Parameterization, SingleEdgeAtUnitWeight) {
  const SubsystemDynamics sub = double_integrator_siso();
  const NetworkTopology t(DiGraph(2, {{1, 2}}), {1});
  const WeightAssignment w{Fashion::kSiso, {col({1.0})}};
  const LumpedSystem direct = assemble_lumped(sub, t, Fashion::kSiso, w);
  const LumpedSystem rebuilt = linear_parameterization(sub, t).reconstruct(w, 1);
  EXPECT_LT(max_abs(direct.A_sys - rebuilt.A_sys), 1e-15);
  EXPECT_EQ(direct.B_sys, rebuilt.B_sys);
}

TEST(Parameterization, ZeroWeightsGiveDecoupledPair) {
  const SubsystemDynamics sub = msd_triple();
  const NetworkTopology t(DiGraph(3, nrcs::bidirectional_chain(3)), {2});
  const LinearParameterization lp = linear_parameterization(sub, t);
  const LumpedSystem sys = lp.reconstruct(WeightAssignment::zeros(t.graph, Fashion::kMultiWeighted, 2), 2);
  EXPECT_EQ(sys.A_sys, kron_oracle(Matrix::Identity(3, 3), sub.A));
  EXPECT_EQ(sys.B_sys, kron_oracle(t.selector(), sub.B));
}

TEST(Parameterization, ReconstructionOnRandomLambda) {
  RandomSource rng(35);
  const SubsystemDynamics msd = msd_triple();
  for (int t = 0; t < 100; ++t) {
    const int N = rng.uniform_int(2, 5);
    const bool use_msd = t % 2 == 0;
    const int r = use_msd ? 2 : rng.uniform_int(1, 3);
    const int n = use_msd ? 2 : rng.uniform_int(1, 3);
    const SubsystemDynamics sub =
        use_msd ? msd : SubsystemDynamics{random_matrix(rng, n, n), random_matrix(rng, n, r), random_matrix(rng, r, n)};
    const NetworkTopology topo(DiGraph(N, random_edges(rng, N, 0.5)), {1});
    WeightAssignment w = WeightAssignment::zeros(topo.graph, Fashion::kMultiWeighted, r);
    for (auto& ch : w.channels)
      for (int k = 0; k < ch.size(); ++k) ch(k) = 3.0 * rng.uniform_signed();
    const LumpedSystem direct = assemble_lumped(sub, topo, Fashion::kMultiWeighted, w);
    const LumpedSystem rebuilt = linear_parameterization(sub, topo).reconstruct(w, r);
    EXPECT_LT(max_abs(direct.A_sys - rebuilt.A_sys), 1e-12);
    EXPECT_EQ(direct.B_sys, rebuilt.B_sys);
  }
}

TEST(Heterogeneous, IdenticalSubsystemsReduce) {
  RandomSource rng(36);
  for (int t = 0; t < 30; ++t) {
    const int N = rng.uniform_int(1, 5);
    const int n = rng.uniform_int(1, 3);
    const SubsystemDynamics sub{random_matrix(rng, n, n), random_matrix(rng, n, 1), random_matrix(rng, 1, n)};
    const NetworkTopology topo(DiGraph(N, random_edges(rng, N, 0.5)), {1});
    const WeightAssignment w = sample_random_weights(topo.graph, Fashion::kSiso, 1, rng);
    const LumpedSystem a = assemble_lumped(sub, topo, Fashion::kSiso, w);
    const LumpedSystem b = assemble_heterogeneous(identical_subsystems(sub, N), topo, w.channel(0));
    EXPECT_LT(max_abs(a.A_sys - b.A_sys), 1e-12);
    EXPECT_EQ(a.B_sys, b.B_sys);
  }
}

TEST(Heterogeneous, MixedDimensionsByHand) {
  const HeteroSubsystem s1{Matrix::Constant(1, 1, -1.0), col({2}), row({3})};
  const HeteroSubsystem s2{(Matrix(2, 2) << 0, 1, -2, 0).finished(), col({0, 1}), row({1, 0})};
  const double l = 0.5;
  const NetworkTopology topo(DiGraph(2, {{1, 2}}), {1});
  const LumpedSystem sys = assemble_heterogeneous({s1, s2}, topo, col({l}));
  ASSERT_EQ(sys.A_sys.rows(), 3);
  EXPECT_EQ(sys.A_sys.block(0, 0, 1, 1), s1.A);
  EXPECT_EQ(sys.A_sys.block(1, 1, 2, 2), Matrix(s2.A - l * s2.b * s2.c));
  EXPECT_EQ(sys.A_sys.block(1, 0, 2, 1), Matrix(l * s2.b * s1.c));
  EXPECT_EQ(sys.A_sys.block(0, 1, 1, 2), Matrix::Zero(1, 2));
  EXPECT_EQ(sys.B_sys, col({2, 0, 0}));
}

TEST(Heterogeneous, ZeroWeightsBlockDiagonal) {
  const HeteroSubsystem s1{Matrix::Constant(1, 1, 4.0), col({1}), row({1})};
  const HeteroSubsystem s2{(Matrix(2, 2) << 1, 2, 3, 4).finished(), col({5, 6}), row({1, 1})};
  const NetworkTopology topo(DiGraph(2, {{1, 2}, {2, 1}}), {1, 2});
  const LumpedSystem sys = assemble_heterogeneous({s1, s2}, topo, Vector::Zero(2));
  Matrix expected_A = Matrix::Zero(3, 3);
  expected_A(0, 0) = 4.0;
  expected_A.block(1, 1, 2, 2) = s2.A;
  EXPECT_EQ(sys.A_sys, expected_A);
  EXPECT_EQ(sys.B_sys, (Matrix(3, 2) << 1, 0, 0, 5, 0, 6).finished());
}

TEST(Heterogeneous, PerturbationFillRespectsMask) {
  HeteroPerturbation p;
  p.mask = Pattern::Constant(2, 2, false);
  p.mask(0, 1) = true;
  RandomSource rng(37);
  for (int t = 0; t < 100; ++t) {
    const Matrix d = p.fill(rng);
    EXPECT_EQ(d(0, 0), 0.0);
    EXPECT_EQ(d(1, 0), 0.0);
    EXPECT_EQ(d(1, 1), 0.0);
    EXPECT_LE(std::abs(d(0, 1)), 1.0);
  }
}

TEST(Examples, MsdPairWeights) {
  const DiGraph chain(2, bidirectional_chain(2));
  const WeightAssignment w = msd_weights(chain, {2, 3}, {5, 7}, {11, 13});
  // l1_21 = k2/m2, l1_12 = k2/m1, likewise for the dampers.
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(1, 2)), 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(2, 1)), 7.0 / 2.0);
  EXPECT_DOUBLE_EQ(w.channel(1)(chain.edge_index(1, 2)), 13.0 / 3.0);
  EXPECT_DOUBLE_EQ(w.channel(1)(chain.edge_index(2, 1)), 13.0 / 2.0);
}

TEST(Examples, TankChainWeights) {
  const DiGraph chain(3, bidirectional_chain(3));
  const WeightAssignment w = tank_weights(chain, {2, 3, 5}, {7, 11, 13});
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(1, 2)), 1.0 / 21.0);  // 1/(C2 R1)
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(2, 1)), 1.0 / 14.0);  // 1/(C1 R1)
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(2, 3)), 1.0 / 55.0);  // 1/(C3 R2)
  EXPECT_DOUBLE_EQ(w.channel(0)(chain.edge_index(3, 2)), 1.0 / 33.0);  // 1/(C2 R2)
}

TEST(Examples, PowerRealizations) {
  const std::vector<Matrix> d = power_realizations({2, 4, 5}, {1, 3, 2});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[1](1, 1), -0.75);
  EXPECT_EQ(d[1](0, 0), 0.0);
  const Model m = example_model(ExampleName::kPower, 3);
  ASSERT_TRUE(m.perturbation.has_value());
  EXPECT_TRUE(m.perturbation->mask(1, 1));
  EXPECT_EQ(m.perturbation->mask.count(), 1);
  EXPECT_EQ(m.fashion, Fashion::kSiso);
}

TEST(Examples, Shapes) {
  const Model msd = example_model(ExampleName::kMsd, 4);
  EXPECT_EQ(msd.sub.r(), 2);
  EXPECT_EQ(msd.fashion, Fashion::kMultiWeighted);
  EXPECT_EQ(msd.topo.graph.edge_count(), 6);
  const Model tanks = example_model(ExampleName::kTanks, 5);
  EXPECT_EQ(tanks.sub.n(), 1);
  EXPECT_EQ(tanks.fashion, Fashion::kSiso);
  EXPECT_NO_THROW(tanks.validate());
  EXPECT_THROW(example_model(ExampleName::kTanks, 1), Error);
  EXPECT_THROW(parse_example_name("reactor"), Error);
}

TEST(ModelValidate, HeterogeneousMustBeSiso) {
  Model m = example_model(ExampleName::kMsd, 2);
  m.hetero = identical_subsystems({m.sub.A, m.sub.B.leftCols(1), m.sub.C.topRows(1)}, 2);
  EXPECT_THROW(m.validate(), Error);
}
