#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("dosn_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args) {
        const fs::path out = dir_ / "stdout";
        const fs::path err = dir_ / "stderr";
        const std::string cmd = "DOSN_WORKSPACE='" + (dir_ / "ws").string() + "' '" DOSN_BIN "' " + args + " >'" +
                                out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        return {WEXITSTATUS(status), slurp(out), slurp(err)};
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }
    fs::path write(const std::string& name, const std::string& data) {
        std::ofstream(dir_ / name, std::ios::binary) << data;
        return dir_ / name;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, EndToEnd) {
    ASSERT_EQ(run("init --miners 7 --seed 4").code, 0);
    ASSERT_EQ(run("user add alice").code, 0);
    ASSERT_EQ(run("user add bob").code, 0);
    ASSERT_EQ(run("user add carol").code, 0);
    const std::string payload = std::string("binary\0data\xff", 12) + std::string(3000, 'p');
    const fs::path file = write("in.bin", payload);

    auto posted = run("--json post --owner alice --file '" + file.string() +
                      "' --allow friend --acl bob=friend --chunk-size 1024");
    ASSERT_EQ(posted.code, 0) << posted.err;
    const auto j = nlohmann::json::parse(posted.out);
    const std::string id = j["content_id"];
    const std::string pid = std::to_string(j["policy_id"].get<int>());

    auto got = run("get --as bob --content " + id);
    EXPECT_EQ(got.code, 0) << got.err;
    EXPECT_EQ(got.out, payload);

    auto denied = run("get --as carol --content " + id);
    EXPECT_EQ(denied.code, 1);
    EXPECT_EQ(nlohmann::json::parse(denied.err)["error"], "AccessDenied");

    EXPECT_EQ(run("grant --owner alice --content " + id + " --user carol --role friend").code, 0);
    EXPECT_EQ(run("get --as carol --content " + id).out, payload);
    EXPECT_EQ(run("revoke --owner alice --content " + id + " --user carol").code, 0);
    EXPECT_EQ(run("get --as carol --content " + id).code, 1);

    auto bad_grant = run("grant --owner bob --content " + id + " --user carol --role friend");
    EXPECT_EQ(bad_grant.code, 1);
    EXPECT_EQ(nlohmann::json::parse(bad_grant.err)["error"], "NotOwner");

    auto shown = run("policy show " + pid);
    ASSERT_EQ(shown.code, 0);
    EXPECT_EQ(nlohmann::json::parse(shown.out)["content_id"], id);

    // A tampering miner is survived and reported by alias.
    const auto stats = nlohmann::json::parse(run("net stats --json").out);
    std::string shard_holder;
    for (const auto& m : stats["miners"])
        if (m["shards"].get<int>() > 0) shard_holder = m["alias"];
    ASSERT_FALSE(shard_holder.empty());
    EXPECT_EQ(run("miner set-behavior " + shard_holder + " tamper").code, 0);
    got = run("get --as bob --content " + id);
    EXPECT_EQ(got.code, 0);
    EXPECT_EQ(got.out, payload);
    EXPECT_NE(got.err.find("miner " + shard_holder), std::string::npos) << got.err;
    EXPECT_EQ(run("miner set-behavior " + shard_holder + " honest").code, 0);

    auto verified = run("--json ledger verify '" + (dir_ / "ws" / "ledger.jsonl").string() + "'");
    ASSERT_EQ(verified.code, 0) << verified.err;
    EXPECT_TRUE(nlohmann::json::parse(verified.out)["valid"].get<bool>());

    EXPECT_EQ(run("forget --owner alice --content " + id).code, 0);
    EXPECT_EQ(run("get --as bob --content " + id).code, 1);
    EXPECT_EQ(run("acc delete --owner alice").code, 0);
    EXPECT_EQ(nlohmann::json::parse(run("policy show " + pid).err)["error"], "ContractDeactivated");
}

TEST_F(Cli, UsageAndDomainErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("init --miners notanumber").code, 2);
    auto missing = run("user add bob");
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(nlohmann::json::parse(missing.err)["error"], "WorkspaceError");
    ASSERT_EQ(run("init --miners 3").code, 0);
    EXPECT_EQ(run("init").code, 1);
    EXPECT_EQ(run("miner set-behavior m1 sleepy").code, 2);
    EXPECT_EQ(nlohmann::json::parse(run("miner set-behavior m9 tamper").err)["error"], "UnknownMiner");
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, LedgerVerifyDetectsCorruption) {
    ASSERT_EQ(run("init --miners 5").code, 0);
    ASSERT_EQ(run("user add a").code, 0);
    const fs::path file = write("f", "hello");
    ASSERT_EQ(run("post --owner a --file '" + file.string() + "' --allow x").code, 0);
    const fs::path ledger = dir_ / "ws" / "ledger.jsonl";
    std::string text = slurp(ledger);
    const auto pos = text.find("\"nonce\":2");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 9, "\"nonce\":3");
    const fs::path bad = write("bad.jsonl", text);
    auto r = run("ledger verify '" + bad.string() + "'");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "ChainInvalid");
}

TEST_F(Cli, RunScenarioAndBaseline) {
    auto r = run("run '" DOSN_SCENARIOS "/basic.json'");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["unmet_expectations"], 0);
    EXPECT_EQ(report["wrong_plaintext"], 0);

    auto b = run("--json baseline compare --k 5 --contents 4 --size 65536 --r 2");
    ASSERT_EQ(b.code, 0) << b.err;
    const auto j = nlohmann::json::parse(b.out);
    EXPECT_EQ(j["baseline_bytes"], 5 * 4 * 65536);
    EXPECT_LE(j["dosn_bytes"].get<double>(), 2.0 * 4 * 65536 * 1.05);
}
