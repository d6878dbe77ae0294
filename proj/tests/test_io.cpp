#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "gapcert/io.hpp"

using namespace gapcert;
using io::json;

TEST(Io, ObservableLevelsRoundTrip)
{
    const json j = {{"levels", {{"-1/3", 1}, {"1/2", 2}, {2.5, 1}}}};
    const auto obs = io::observable_from_json(j);
    EXPECT_EQ(obs.site_dim(), 4);
    EXPECT_NEAR(obs.eigenvalue_of(0), -1.0 / 3.0, 1e-16);
    EXPECT_EQ(obs.level_of(2), 1);
    EXPECT_TRUE(obs.levels()[0].exact);
    const auto back = io::observable_from_json(io::observable_to_json(obs));
    ASSERT_EQ(back.levels().size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back.levels()[i].value, obs.levels()[i].value);
        EXPECT_EQ(back.levels()[i].degeneracy, obs.levels()[i].degeneracy);
        EXPECT_EQ(back.levels()[i].exact, obs.levels()[i].exact);
    }
    EXPECT_EQ(io::observable_to_json(obs).at("levels")[0][0], "-1/3");
}

TEST(Io, ObservableObjectsAndDiagonal)
{
    const auto a = io::observable_from_json(json{{"levels", {{{"value", 0}, {"degeneracy", 2}}, {{"value", 1}}}}});
    EXPECT_EQ(a.site_dim(), 3);
    const auto jz = io::observable_from_json(json{{"diagonal", {"1/2", "-1/2"}}});
    EXPECT_EQ(jz.eigenvalue_of(0), 0.5);
    EXPECT_EQ(jz.eigenvalue_of(1), -0.5);
    // Non-consecutive assignment comes back through the diagonal form.
    const auto back = io::observable_from_json(io::observable_to_json(jz));
    EXPECT_EQ(back.eigenvalue_of(0), 0.5);
    EXPECT_THROW(io::observable_from_json(json{{"levels", {{"x/2", 1}, {1, 1}}}}), InvalidArgument);
    EXPECT_THROW(io::observable_from_json(json::object()), InvalidArgument);
}

TEST(Io, HamiltonianRoundTrip)
{
    const auto h = random_local(ManyBodySpace(4, SiteSpace(3)), chain_supports(4, 2, false), 3);
    const json j = io::hamiltonian_to_json(h);
    const auto back = io::hamiltonian_from_json(j);
    EXPECT_EQ(back.interaction_count(), h.interaction_count());
    EXPECT_EQ(back.space(), h.space());
    for (std::size_t t = 0; t < h.terms().size(); ++t) {
        EXPECT_EQ(back.terms()[t].support, h.terms()[t].support);
        EXPECT_EQ((back.terms()[t].block - h.terms()[t].block).norm(), 0.0);
    }
}

TEST(Io, HamiltonianRealEntries)
{
    const json j = {{"n_sites", 2},
                    {"d", 2},
                    {"terms", {{{"support", {0, 1}}, {"block", {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1}}}}}};
    const auto h = io::hamiltonian_from_json(j);
    EXPECT_TRUE(h.is_real());
    EXPECT_EQ(h.dense<double>()(1, 1), -1.0);
    json bad = j;
    bad["terms"][0]["block"] = {1, 2, 3};
    EXPECT_THROW(io::hamiltonian_from_json(bad), InvalidArgument);
}

TEST(Io, CertificateRoundTrip)
{
    GapCertificate c;
    c.kind = BoundKind::theoremKlocal;
    c.bound_value = 0.125;
    c.inputs = {{"K", 3}, {"P_sep", 1e-7}};
    c.notes = {"a note"};
    c.compare_with(0.1);
    const auto back = io::certificate_from_json(io::certificate_to_json(c));
    EXPECT_EQ(back.kind, c.kind);
    EXPECT_EQ(back.bound_value, c.bound_value);
    EXPECT_EQ(back.inputs, c.inputs);
    EXPECT_EQ(back.exact_gap, c.exact_gap);
    EXPECT_EQ(back.satisfied, c.satisfied);
    EXPECT_EQ(back.notes, c.notes);
}

TEST(Io, SpectralPairFields)
{
    const auto p = lowest_two(tfim_chain(4, 1.0, 0.5, false));
    const json j = io::spectral_pair_to_json(p);
    EXPECT_EQ(j.at("E0").get<double>(), p.e0);
    EXPECT_EQ(j.at("gap").get<double>(), p.gap);
    EXPECT_EQ(j.at("method"), "dense");
    EXPECT_TRUE(j.contains("seed"));
    EXPECT_FALSE(j.contains("ground"));
}

TEST(Io, DickeSpecRoundTrip)
{
    const json j = {{"n", 3}, {"coefficients", {1, 0, -2, 0, 1}}, {"sign", "-"}, {"normalize", true}};
    const auto spec = io::dicke_spec_from_json(j);
    EXPECT_EQ(spec.sign, -1);
    EXPECT_NEAR(spec.coefficients[2].real(), -2.0 / std::sqrt(6.0), 1e-15);
    EXPECT_NO_THROW(spec.validate());
    const auto back = io::dicke_spec_from_json(io::dicke_spec_to_json(spec));
    EXPECT_EQ(back.n, spec.n);
    EXPECT_EQ(back.sign, spec.sign);
    EXPECT_EQ(back.coefficients, spec.coefficients);
    EXPECT_THROW(io::dicke_spec_from_json(json{{"n", 1}, {"coefficients", {1, -1}}, {"sign", "*"}}), InvalidArgument);
}

TEST(Io, Files)
{
    const auto dir = std::filesystem::temp_directory_path() / "gapcert_io_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "x.json").string();
    io::write_text_file(path, R"({"a": [1, 2]})");
    EXPECT_EQ(io::read_json_file(path).at("a")[1], 2);
    io::write_text_file(path, "{ not json");
    EXPECT_THROW(io::read_json_file(path), InvalidArgument);
    EXPECT_THROW(io::read_json_file((dir / "missing.json").string()), Error);
    std::filesystem::remove_all(dir);
}
