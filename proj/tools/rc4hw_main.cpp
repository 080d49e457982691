// Copyright 2026 The rc4hw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rc4hw/activity.hpp"
#include "rc4hw/bitsample.hpp"
#include "rc4hw/hex.hpp"
#include "rc4hw/hw_model.hpp"
#include "rc4hw/rc4.hpp"
#include "rc4hw/suite.hpp"
#include "rc4hw/transport.hpp"

namespace {

using namespace rc4hw;

/// Flag misuse distinct from runtime failures; exits with status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyOptions {
  std::string hex;
  std::string file;
};

void add_key_options(CLI::App* cmd, KeyOptions& opts, bool with_default) {
  auto* hex_opt =
      cmd->add_option("--key-hex", opts.hex, "key as lowercase hex, 1..256 octets");
  cmd->add_option("--key-file", opts.file, "file whose raw bytes are the key")
      ->excludes(hex_opt);
  if (with_default) hex_opt->default_val("4b6579");
}

Rc4Key parse_key(const KeyOptions& opts) {
  try {
    if (!opts.file.empty()) {
      std::ifstream in(opts.file, std::ios::binary);
      if (!in) throw UsageError("cannot open key file " + opts.file);
      std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>()};
      return Rc4Key(std::move(bytes));
    }
    if (opts.hex.empty()) throw UsageError("one of --key-hex/--key-file is required");
    return Rc4Key(hex_decode(opts.hex));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Engine parse_engine(const std::string& name) {
  if (name == "reference") return Engine::Reference;
  if (name == "hw") return Engine::HardwareModel;
  throw UsageError("--engine must be reference or hw");
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") {
    return std::vector<std::uint8_t>{std::istreambuf_iterator<char>(std::cin),
                                     std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input " + path);
  return std::vector<std::uint8_t>{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, std::span<const std::uint8_t> data) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(data.data()),
                    static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

int run_keystream(const Rc4Key& key, std::uint64_t n, Engine engine) {
  std::vector<std::uint8_t> bytes;
  if (n > 0) {
    if (engine == Engine::Reference) {
      bytes = keystream(key, n);
    } else {
      Rc4Hardware hw(key);
      hw.run_ksa();
      bytes = hw.run_prga(n);
    }
  }
  std::cout << hex_encode(bytes) << '\n';
  return 0;
}

int run_encrypt(const Rc4Key& key, Engine engine, const std::string& in_path,
                const std::string& out_path) {
  std::vector<std::uint8_t> data = read_input(in_path);
  KeystreamEngine eng(key, engine);
  eng.apply(data);
  write_output(out_path, data);
  return 0;
}

int run_trace(const Rc4Key& key, const std::string& unit,
              std::uint64_t clocks) {
  Rc4Hardware hw(key);
  HwUnit u;
  if (unit == "ksa") {
    u = HwUnit::Ksa;
  } else if (unit == "prga") {
    u = HwUnit::Prga;
    hw.run_ksa();
  } else {
    throw UsageError("--unit must be ksa or prga");
  }
  const auto events = trace_collect(hw, u, clocks);
  write_trace(std::cout, events);
  return 0;
}

int run_cycles(const Rc4Key& key, std::uint64_t n) {
  std::vector<std::uint8_t> data(n, 0);
  const auto result = rc4_hw_encrypt(key, data);
  const CycleReport& r = result.report;
  std::cout << "ksa_clocks=" << r.ksa_clocks << '\n'
            << "prga_clocks=" << r.prga_clocks << '\n'
            << "total_clocks=" << r.total_clocks << '\n'
            << "bytes=" << r.bytes << '\n'
            << "prga_per_byte=" << r.prga_per_byte.str() << '\n'
            << "rc4_per_byte=" << r.rc4_per_byte.str() << '\n';
  return 0;
}

int run_power(const Rc4Key& key, std::uint64_t n, const std::string& format) {
  const GatingComparison cmp = compare_gating(key, n);
  if (format == "csv") {
    write_activity_csv(std::cout, cmp);
  } else if (format == "table") {
    write_activity_table(std::cout, cmp);
  } else {
    throw UsageError("--format must be table or csv");
  }
  return 0;
}

int run_corpus(const std::string& dir, std::size_t samples,
               std::uint64_t bits) {
  write_corpus(dir, generate_corpus(samples, bits));
  std::cerr << "wrote " << samples << " samples to " << dir << '\n';
  return 0;
}

int run_nist(std::size_t samples, std::uint64_t bits,
             const std::string& corpus_dir, const std::string& pvalue_file,
             const SuiteConfig& config, const std::string& out_path) {
  std::vector<BitSample> corpus = corpus_dir.empty()
                                      ? generate_corpus(samples, bits)
                                      : read_corpus(corpus_dir);
  std::map<std::string, std::vector<PValue>> external;
  if (!pvalue_file.empty()) {
    std::ifstream in(pvalue_file);
    if (!in) throw std::runtime_error("cannot open " + pvalue_file);
    external = read_pvalue_lines(in);
  }
  const SuiteReport report = run_suite(corpus, config, external);
  if (out_path == "-") {
    write_suite_report(std::cout, report);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output " + out_path);
    write_suite_report(out, report);
  }
  return 0;
}

int run_send(const std::string& addr, const Rc4Key& key, Engine engine,
             const std::string& in_path) {
  FdStream stream = tcp_connect(addr);
  SessionConfig config{Role::Sender, key, engine};
  auto session = handshake(stream, config);
  std::uint64_t sent;
  if (in_path == "-") {
    sent = send_stream(session, std::cin);
  } else {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input " + in_path);
    sent = send_stream(session, in);
  }
  std::cerr << "sent " << sent << " octets\n";
  return 0;
}

int run_recv(const std::string& addr, const Rc4Key& key, Engine engine,
             const std::string& out_path) {
  TcpListener listener(addr);
  FdStream stream = listener.accept_one();
  SessionConfig config{Role::Receiver, key, engine};
  auto session = handshake(stream, config);
  std::uint64_t received;
  if (out_path == "-") {
    received = recv_stream(session, std::cout);
    std::cout.flush();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output " + out_path);
    received = recv_stream(session, out);
  }
  std::cerr << "received " << received << " octets\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-byte-per-clock RC4 model, randomness harness, and "
               "encrypted stream endpoints"};
  app.require_subcommand(1);
  int rc = 0;

  // keystream
  auto* ks = app.add_subcommand("keystream", "print keystream bytes as hex");
  KeyOptions ks_key;
  add_key_options(ks, ks_key, false);
  std::uint64_t ks_bytes = 16;
  std::string ks_engine = "reference";
  ks->add_option("--bytes", ks_bytes, "number of keystream octets");
  ks->add_option("--engine", ks_engine, "reference|hw");
  ks->callback([&] {
    rc = run_keystream(parse_key(ks_key), ks_bytes, parse_engine(ks_engine));
  });

  // encrypt
  auto* enc = app.add_subcommand("encrypt", "XOR data with the keystream");
  KeyOptions enc_key;
  add_key_options(enc, enc_key, false);
  std::string enc_engine = "reference", enc_in = "-", enc_out = "-";
  enc->add_option("--engine", enc_engine, "reference|hw");
  enc->add_option("--in", enc_in, "input file, - for stdin");
  enc->add_option("--out", enc_out, "output file, - for stdout");
  enc->callback([&] {
    rc = run_encrypt(parse_key(enc_key), parse_engine(enc_engine), enc_in,
                     enc_out);
  });

  // trace
  auto* tr = app.add_subcommand("trace", "print clock-edge events");
  KeyOptions tr_key;
  add_key_options(tr, tr_key, true);
  std::string tr_unit = "prga";
  std::uint64_t tr_clocks = 8;
  tr->add_option("--unit", tr_unit, "ksa|prga");
  tr->add_option("--clocks", tr_clocks, "clock cycles to trace");
  tr->callback([&] { rc = run_trace(parse_key(tr_key), tr_unit, tr_clocks); });

  // cycles
  auto* cy = app.add_subcommand("cycles", "print the clock-count report");
  KeyOptions cy_key;
  add_key_options(cy, cy_key, true);
  std::uint64_t cy_bytes = 0;
  cy->add_option("--bytes", cy_bytes, "message length n")->required();
  cy->callback([&] { rc = run_cycles(parse_key(cy_key), cy_bytes); });

  // power
  auto* pw = app.add_subcommand("power", "gated vs ungated switching activity");
  KeyOptions pw_key;
  add_key_options(pw, pw_key, true);
  std::uint64_t pw_bytes = 0;
  std::string pw_format = "table";
  pw->add_option("--bytes", pw_bytes, "message length n")->required();
  pw->add_option("--format", pw_format, "table|csv");
  pw->callback([&] { rc = run_power(parse_key(pw_key), pw_bytes, pw_format); });

  // corpus
  auto* cp = app.add_subcommand("corpus", "write a keystream corpus to disk");
  std::string cp_out;
  std::size_t cp_samples = 300;
  std::uint64_t cp_bits = 1342400;
  cp->add_option("--out", cp_out, "output directory")->required();
  cp->add_option("--samples", cp_samples, "number of samples");
  cp->add_option("--bits", cp_bits, "bits per sample (multiple of 8)");
  cp->callback([&] { rc = run_corpus(cp_out, cp_samples, cp_bits); });

  // nist
  auto* ni = app.add_subcommand("nist", "run the statistical suite");
  std::size_t ni_samples = 300;
  std::uint64_t ni_bits = 1342400;
  std::string ni_corpus, ni_pvalues, ni_out = "-";
  SuiteConfig ni_config;
  ni->add_option("--samples", ni_samples, "number of samples");
  ni->add_option("--bits", ni_bits, "bits per sample");
  ni->add_option("--corpus", ni_corpus, "load corpus from directory");
  ni->add_option("--pvalues", ni_pvalues, "ingest external P-value lines");
  ni->add_option("--block-m", ni_config.block_len, "block frequency M");
  ni->add_option("--serial-m", ni_config.serial_m, "serial pattern length");
  ni->add_option("--apen-m", ni_config.apen_m, "approximate entropy length");
  ni->add_option("--out", ni_out, "report file, - for stdout");
  ni->callback([&] {
    rc = run_nist(ni_samples, ni_bits, ni_corpus, ni_pvalues, ni_config,
                  ni_out);
  });

  // send
  auto* sd = app.add_subcommand("send", "encrypt and stream to a receiver");
  KeyOptions sd_key;
  add_key_options(sd, sd_key, false);
  std::string sd_connect, sd_engine = "reference", sd_in = "-";
  sd->add_option("--connect", sd_connect, "receiver host:port")->required();
  sd->add_option("--engine", sd_engine, "reference|hw");
  sd->add_option("--in", sd_in, "input file, - for stdin");
  sd->callback([&] {
    rc = run_send(sd_connect, parse_key(sd_key), parse_engine(sd_engine),
                  sd_in);
  });

  // recv
  auto* rv = app.add_subcommand("recv", "accept a sender and decrypt");
  KeyOptions rv_key;
  add_key_options(rv, rv_key, false);
  std::string rv_listen, rv_engine = "reference", rv_out = "-";
  rv->add_option("--listen", rv_listen, "bind host:port")->required();
  rv->add_option("--engine", rv_engine, "reference|hw");
  rv->add_option("--out", rv_out, "output file, - for stdout");
  rv->callback([&] {
    rc = run_recv(rv_listen, parse_key(rv_key), parse_engine(rv_engine),
                  rv_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    std::cerr << app.help();
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
