#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "annealab_cli/output.hpp"

using namespace annealab::cli;

TEST(Output, JsonUsesSeventeenDigitsAndSortedKeys) {
  const nlohmann::json j{{"z", 0.1}, {"a", 1}, {"m", {1.5, 2.0}}, {"bad", std::nan("")}};
  const auto text = dump_json(j);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos) << text;
  EXPECT_LT(text.find("\"a\""), text.find("\"z\""));
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_NO_THROW((void)nlohmann::json::parse(text));
}

TEST(Output, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Output, DatTableIsTabSeparatedWithHeader) {
  DatTable t{{"note"}, {"x [1]", "y [m]"}, {{1.0, 0.5}}};
  EXPECT_EQ(t.render(), "# note\n# x [1]\ty [m]\n1\t0.5\n");
}

TEST(Output, ManifestListsEveryFile) {
  const auto dir = std::filesystem::temp_directory_path() / "annealab_output_test";
  std::filesystem::remove_all(dir);
  OutputDirectory out(dir);
  out.write_json("b.json", {{"x", 1.0}});
  out.write_plot("a", DatTable{{}, {"x"}, {{1.0}}}, "plot 'a.dat'\n");
  out.write_manifest("test");
  std::ifstream in(dir / "manifest.json");
  const auto m = nlohmann::json::parse(in);
  ASSERT_EQ(m["files"].size(), 3u);
  EXPECT_EQ(m["files"][0]["path"], "a.dat");
  EXPECT_EQ(m["files"][2]["path"], "b.json");
  EXPECT_EQ(m["files"][2]["sha256"].get<std::string>().size(), 64u);
  std::filesystem::remove_all(dir);
}
