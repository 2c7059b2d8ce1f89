// Copyright 2026 The mfft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mfft/net/arp.hpp"
#include "mfft/net/datapath.hpp"
#include "mfft/net/frame.hpp"
#include "mfft/net/pcap.hpp"
#include "mfft/wire.hpp"
#include "test_util.hpp"

namespace mfft::net {
namespace {

using Bytes = std::vector<std::uint8_t>;

Bytes load_hex(const std::string& name) {
  std::ifstream is(std::string(MFFT_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(is) << name;
  Bytes out;
  std::string tok;
  while (is >> tok) out.push_back(static_cast<std::uint8_t>(std::stoul(tok, nullptr, 16)));
  return out;
}

FrameSpec golden_spec() {
  FrameSpec s;
  s.dst_mac = MacAddress::parse("02:00:00:00:00:02");
  s.src_mac = MacAddress::parse("02:00:00:00:00:01");
  s.src_ip = Ipv4Address::parse("10.0.0.1");
  s.dst_ip = Ipv4Address::parse("10.0.0.2");
  s.src_port = 5000;
  s.dst_port = 6000;
  s.identification = 0x1234;
  return s;
}

Bytes text(std::string_view s) { return Bytes(s.begin(), s.end()); }

// Written out longhand over the ten header half-words.
std::uint16_t reference_ip_checksum(const std::uint8_t* h) {
  std::uint32_t sum = 0;
  for (int i = 0; i < 10; ++i) sum += static_cast<std::uint32_t>(h[2 * i]) * 256u + h[2 * i + 1];
  sum = (sum & 0xFFFF) + (sum >> 16);
  sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<std::uint16_t>(0xFFFF - sum);
}

FrameSpec random_spec(std::mt19937& rng) {
  std::uniform_int_distribution<unsigned> byte(0, 255);
  FrameSpec s;
  for (auto& b : s.dst_mac.bytes) b = static_cast<std::uint8_t>(byte(rng));
  for (auto& b : s.src_mac.bytes) b = static_cast<std::uint8_t>(byte(rng));
  s.src_ip = {static_cast<std::uint32_t>(rng())};
  s.dst_ip = {static_cast<std::uint32_t>(rng())};
  s.src_port = static_cast<std::uint16_t>(rng());
  s.dst_port = static_cast<std::uint16_t>(rng());
  s.dscp = static_cast<std::uint8_t>(byte(rng) & 63);
  s.ecn = static_cast<std::uint8_t>(byte(rng) & 3);
  s.identification = static_cast<std::uint16_t>(rng());
  s.flags = static_cast<std::uint8_t>(byte(rng) & 2);  // DF or nothing; MF would mean a fragment
  s.ttl = static_cast<std::uint8_t>(byte(rng));
  return s;
}

Bytes random_payload(std::mt19937& rng, std::size_t max = kMaxUdpPayload) {
  Bytes p(std::uniform_int_distribution<std::size_t>(0, max)(rng));
  for (auto& b : p) b = static_cast<std::uint8_t>(rng());
  return p;
}

CodecError error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const CodecException& e) {
    return e.error();
  }
  ADD_FAILURE() << "no CodecException";
  return CodecError::malformed_header;
}

TEST(Checksum, TextbookExample) {
  const Bytes b = {0x00, 0x01, 0xf2, 0x03, 0xf4, 0xf5, 0xf6, 0xf7};
  EXPECT_EQ(checksum_accumulate(b), 0x2ddf0u);
  EXPECT_EQ(internet_checksum(b), 0x220d);
}

TEST(Address, ParseAndFormat) {
  EXPECT_EQ(MacAddress::parse("02:0a:ff:00:10:01").to_string(), "02:0a:ff:00:10:01");
  EXPECT_EQ(Ipv4Address::parse("192.168.1.20").to_string(), "192.168.1.20");
  EXPECT_THROW(Ipv4Address::parse("1.2.3"), std::invalid_argument);
  EXPECT_THROW(Ipv4Address::parse("1.2.3.256"), std::invalid_argument);
  EXPECT_THROW(MacAddress::parse("02:00:00:00:00"), std::invalid_argument);
  EXPECT_THROW(MacAddress::parse("02:00:00:00:00:001"), std::invalid_argument);
}

TEST(Frame, EmptyPayloadLengths) {
  const auto b = serialize_udp(golden_spec(), {});
  EXPECT_EQ(b.size(), 42u);
  EXPECT_EQ(detail::get16(&b[14 + 2]), 28);
  EXPECT_EQ(detail::get16(&b[34 + 4]), 8);
}

TEST(Frame, GoldenFixtures) {
  EXPECT_EQ(serialize_udp(golden_spec(), text("mfft golden frame!")), load_hex("udp_18.hex"));
  EXPECT_EQ(serialize_udp(golden_spec(), {}), load_hex("udp_empty.hex"));

  FrameSpec s = golden_spec();
  s.identification = 0xBEEF;
  s.ttl = 3;
  s.dscp = 0xB8 >> 2;
  s.flags = 0;
  Bytes ramp(64);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(serialize_udp(s, ramp), load_hex("udp_tos_ttl.hex"));
}

TEST(Frame, ZeroUdpChecksumIsSentAsAllOnes) {
  const Bytes golden = load_hex("udp_csum_zero.hex");
  const Bytes payload(golden.end() - 2, golden.end());
  const auto b = serialize_udp(golden_spec(), payload);
  EXPECT_EQ(b, golden);
  EXPECT_EQ(detail::get16(&b[40]), 0xFFFF);
  EXPECT_EQ(parse_udp(b).payload, payload);
}

TEST(Frame, HeaderChecksumIndependentlyVerified) {
  const auto b = serialize_udp(golden_spec(), text("mfft golden frame!"));
  ASSERT_EQ(b.size(), 42u + 18u);
  Bytes h(b.begin() + 14, b.begin() + 34);
  const std::uint16_t stored = detail::get16(&h[10]);
  h[10] = h[11] = 0;
  EXPECT_EQ(reference_ip_checksum(h.data()), stored);
}

TEST(Frame, VlanTagIsParsedAndPreserved) {
  const auto f = parse_udp(load_hex("udp_vlan.hex"));
  ASSERT_TRUE(f.headers.eth.vlan_tci.has_value());
  EXPECT_EQ(*f.headers.eth.vlan_tci, 0x2064);
  EXPECT_EQ(f.payload, text("tagged"));
  EXPECT_EQ(f.headers.spec(), golden_spec());
}

TEST(Frame, TrailingPaddingIsIgnored) {
  auto b = serialize_udp(golden_spec(), text("hi"));
  b.resize(60, 0);
  EXPECT_EQ(parse_udp(b).payload, text("hi"));
}

TEST(Frame, OversizePayloadRejected) {
  EXPECT_NO_THROW(serialize_udp(golden_spec(), Bytes(kMaxUdpPayload)));
  EXPECT_EQ(error_of([] { serialize_udp(golden_spec(), Bytes(kMaxUdpPayload + 1)); }), CodecError::payload_too_large);
  EXPECT_EQ(error_of([] { encode_frame(golden_spec(), Bytes(9000), kDatapaths[1]); }), CodecError::payload_too_large);
}

TEST(Frame, EveryIpHeaderBitFlipIsCaughtByTheChecksum) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto good = serialize_udp(random_spec(rng), random_payload(rng, 200));
    for (std::size_t bit = 0; bit < 160; ++bit) {
      auto bad = good;
      bad[14 + bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      EXPECT_EQ(error_of([&] { parse_udp(bad); }), CodecError::checksum_mismatch) << "bit " << bit;
    }
  }
}

TEST(Frame, UdpPayloadCorruptionIsCaught) {
  auto b = serialize_udp(golden_spec(), text("mfft golden frame!"));
  b[50] ^= 0x10;
  EXPECT_EQ(error_of([&] { parse_udp(b); }), CodecError::checksum_mismatch);
}

TEST(Frame, NonUdpProtocolIsUnsupported) {
  auto b = serialize_udp(golden_spec(), text("x"));
  b[14 + 9] = 6;  // TCP
  b[24] = b[25] = 0;
  const std::uint16_t sum = reference_ip_checksum(&b[14]);
  b[24] = static_cast<std::uint8_t>(sum >> 8);
  b[25] = static_cast<std::uint8_t>(sum);
  EXPECT_EQ(error_of([&] { parse_udp(b); }), CodecError::unsupported_protocol);
  EXPECT_EQ(error_of([] { parse_udp(load_hex("arp_request.hex")); }), CodecError::unsupported_protocol);
}

TEST(Frame, TruncationIsReported) {
  const auto b = serialize_udp(golden_spec(), text("mfft golden frame!"));
  for (std::size_t cut : {0u, 10u, 20u, 40u, 59u})
    EXPECT_EQ(error_of([&] { parse_udp(std::span(b).first(cut)); }), CodecError::truncated_frame) << cut;
  auto words = encode_frame(golden_spec(), text("mfft golden frame!"), kDatapaths[1]);
  words.pop_back();
  EXPECT_EQ(error_of([&] { decode_frame(words, kDatapaths[1]); }), CodecError::truncated_frame);
  EXPECT_EQ(error_of([&] { decode_frame({}, kDatapaths[1]); }), CodecError::truncated_frame);
}

TEST(Datapath, RoundTripAcrossAllWidths) {
  std::mt19937 rng(2026);
  for (int i = 0; i < 1000; ++i) {
    const auto spec = random_spec(rng);
    const auto payload = random_payload(rng);
    for (const auto& dp : kDatapaths) {
      const auto words = encode_frame(spec, payload, dp);
      const std::size_t bytes = udp_frame_bytes(payload.size());
      ASSERT_EQ(words.size(), (bytes + dp.word_bytes() - 1) / dp.word_bytes());
      EXPECT_EQ(words.size(), transmit_cycles(bytes, dp));
      const auto back = decode_frame(words, dp);
      ASSERT_EQ(back.headers.spec(), spec) << "case " << i << " width " << dp.width_bits;
      ASSERT_EQ(back.payload, payload);
      EXPECT_FALSE(back.headers.eth.vlan_tci.has_value());
    }
  }
}

TEST(Datapath, OneGigabitCarriesOneByteWords) {
  const auto words = encode_frame(golden_spec(), text("mfft golden frame!"), make_datapath(LineRate::g1));
  EXPECT_EQ(words.size(), 60u);
  for (const auto& w : words) EXPECT_EQ(w.keep, 1u);
}

TEST(Datapath, LastWordByteEnable) {
  const auto dp = make_datapath(LineRate::g100);
  const auto words = encode_frame(golden_spec(), text("mfft golden frame!"), dp);
  ASSERT_EQ(words.size(), 1u);
  EXPECT_TRUE(words[0].last);
  EXPECT_EQ(words[0].keep, (std::uint64_t{1} << 60) - 1);
  const auto w2 = encode_frame(golden_spec(), Bytes(86), dp);  // 128 bytes, two full words
  ASSERT_EQ(w2.size(), 2u);
  EXPECT_EQ(w2[1].keep, ~std::uint64_t{0});
  EXPECT_FALSE(w2[0].last);
}

TEST(Datapath, WidthTimesClockCoversLineRate) {
  for (const auto& dp : kDatapaths) EXPECT_GE(dp.datapath_bps(), dp.line_rate_bps()) << dp.width_bits;
  EXPECT_EQ(make_datapath(LineRate::g40, 256).word_bytes(), 32u);
  EXPECT_THROW(make_datapath(LineRate::g10, 128), std::invalid_argument);
}

TEST(Datapath, GoodputAtFullPayload) {
  EXPECT_DOUBLE_EQ(udp_goodput_bps(make_datapath(LineRate::g10), 1472), 10e9 * 1472 / 1538);
}

TEST(Arp, FramesMatchHandAssembledReference) {
  const ArpPacket req{ArpOp::request, golden_spec().src_mac, golden_spec().src_ip, MacAddress{}, golden_spec().dst_ip};
  const ArpPacket rep{ArpOp::reply, golden_spec().dst_mac, golden_spec().dst_ip, golden_spec().src_mac,
                      golden_spec().src_ip};
  EXPECT_EQ(serialize_arp(req), load_hex("arp_request.hex"));
  EXPECT_EQ(serialize_arp(rep), load_hex("arp_reply.hex"));
  EXPECT_EQ(parse_arp(load_hex("arp_request.hex")), req);
  EXPECT_EQ(parse_arp(load_hex("arp_reply.hex")), rep);
}

TEST(Arp, CacheEvictsOldestInsertion) {
  for (std::size_t extra : {1u, 2u, 17u, 256u}) {
    ArpCache c;
    auto ip = [](std::size_t i) { return Ipv4Address{static_cast<std::uint32_t>(0x0a000000 + i)}; };
    for (std::size_t i = 0; i < ArpCache::kCapacity; ++i) EXPECT_FALSE(c.insert(ip(i), MacAddress{}).has_value());
    EXPECT_EQ(c.size(), 256u);
    for (std::size_t i = 0; i < extra; ++i) {
      const auto ev = c.insert(ip(256 + i), MacAddress{});
      ASSERT_TRUE(ev.has_value());
      EXPECT_EQ(*ev, ip(i));
    }
    EXPECT_EQ(c.size(), 256u);
    for (std::size_t i = 0; i < 256 + extra; ++i) EXPECT_EQ(c.lookup(ip(i)).has_value(), i >= extra) << i;
  }
}

TEST(Arp, RefreshKeepsInsertionSlot) {
  ArpCache c;
  const auto mac = MacAddress::parse("02:00:00:00:00:09");
  for (std::uint32_t i = 0; i < 256; ++i) c.insert({i}, MacAddress{});
  c.insert({0}, mac);
  EXPECT_EQ(*c.lookup({0}), mac);
  EXPECT_EQ(*c.insert({1000}, MacAddress{}), Ipv4Address{0});
}

TEST(Arp, EndpointsResolveOnFirstSend) {
  const auto s = golden_spec();
  UdpIpCore a(s.src_mac, s.src_ip), b(s.dst_mac, s.dst_ip);
  auto out = a.send(s.dst_ip, 5000, 6000, text("one"));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], load_hex("arp_request.hex"));
  EXPECT_TRUE(a.send(s.dst_ip, 5000, 6000, text("two")).empty());  // request already outstanding
  EXPECT_EQ(a.pending(), 2u);

  auto rb = b.receive(out[0]);
  EXPECT_FALSE(rb.datagram);
  ASSERT_EQ(rb.transmit.size(), 1u);
  EXPECT_EQ(rb.transmit[0], load_hex("arp_reply.hex"));
  EXPECT_EQ(*b.cache().lookup(s.src_ip), s.src_mac);

  auto ra = a.receive(rb.transmit[0]);
  ASSERT_EQ(ra.transmit.size(), 2u);
  EXPECT_EQ(a.pending(), 0u);
  EXPECT_EQ(*a.cache().lookup(s.dst_ip), s.dst_mac);
  EXPECT_EQ(b.receive(ra.transmit[0]).datagram->payload, text("one"));
  EXPECT_EQ(b.receive(ra.transmit[1]).datagram->payload, text("two"));

  out = a.send(s.dst_ip, 5000, 6000, text("three"));  // cache hit
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(b.receive(out[0]).datagram->payload, text("three"));
}

TEST(Arp, ForeignFramesAreDropped) {
  const auto s = golden_spec();
  UdpIpCore c(MacAddress::parse("02:00:00:00:00:07"), Ipv4Address::parse("10.0.0.7"));
  const auto r = c.receive(serialize_udp(s, text("x")));
  EXPECT_FALSE(r.datagram);
  EXPECT_TRUE(r.transmit.empty());
  EXPECT_TRUE(c.receive(load_hex("arp_request.hex")).transmit.empty());  // asks for someone else
}

TEST(Pcap, HeaderAndRecords) {
  std::stringstream ss;
  {
    PcapWriter w(ss);
    w.write(load_hex("udp_18.hex"), 1, 2);
    w.write(load_hex("arp_request.hex"));
    EXPECT_EQ(w.count(), 2u);
  }
  const std::string raw = ss.str();
  ASSERT_GE(raw.size(), 24u);
  const Bytes head(raw.begin(), raw.begin() + 24);
  const Bytes expect = {0xd4, 0xc3, 0xb2, 0xa1, 2, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xff, 0xff, 0, 0, 1, 0, 0, 0};
  EXPECT_EQ(head, expect);
  EXPECT_EQ(raw.size(), 24u + 16 + 60 + 16 + 42);
  const auto recs = read_pcap(ss);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].ts_sec, 1u);
  EXPECT_EQ(recs[0].ts_usec, 2u);
  EXPECT_EQ(recs[0].data, load_hex("udp_18.hex"));
}

}  // namespace
}  // namespace mfft::net

namespace mfft {
namespace {

TEST(Wire, PackedWordsRoundTrip) {
  const auto v = testing::random_complex(100, 3);
  const auto b = pack_words(v);
  EXPECT_EQ(b.size(), 1600u);
  EXPECT_EQ(unpack_words(b), v);
  const std::vector<Complex> one = {{1.0, -2.0}};
  const auto ob = pack_words(one);
  EXPECT_EQ(ob[7], 0x3f);   // 1.0, little-endian
  EXPECT_EQ(ob[15], 0xc0);  // -2.0
}

TEST(Wire, TransposesThroughTheCodecAreLossless) {
  const auto field = testing::random_real_grid(16, 4);
  const PencilGrid g(16, 2, 2);
  const auto plain = run_distributed_3dfft(field, g);
  for (const auto& dp : net::kDatapaths) {
    std::stringstream cap;
    WireTransport wire(dp, &cap);
    DistOptions opt;
    opt.transport = wire.transport();
    const auto r = run_distributed_3dfft(field, g, opt);
    EXPECT_EQ(max_abs_diff(r.spectrum.values(), plain.spectrum.values()), 0.0);
    EXPECT_EQ(r.ledger, plain.ledger);
    std::size_t expect = 0;
    for (const auto& m : r.ledger.messages) expect += packets_for(m.bytes);
    EXPECT_EQ(wire.stats().frames, expect);
    EXPECT_EQ(wire.stats().messages, r.ledger.messages.size());
    const auto recs = net::read_pcap(cap);
    EXPECT_EQ(recs.size(), expect);
    for (const auto& rec : recs) EXPECT_NO_THROW(net::parse_udp(rec.data));
  }
}

TEST(Wire, ParallelNodesShareTheTransport) {
  const auto field = testing::random_complex_grid(16, 8);
  const PencilGrid g(16, 4, 2);
  WireTransport wire(net::kDatapaths[1]);
  DistOptions opt;
  opt.parallel = true;
  opt.transport = wire.transport();
  const auto r = run_distributed_3dfft(field, g, opt);
  EXPECT_LT(max_abs_diff(r.spectrum.values(), dft_3d(field).values()), 1e-9 * l2_norm(field.values()));
}

TEST(Wire, AddressPlan) {
  EXPECT_EQ(node_ip({3, 7}).to_string(), "10.0.3.7");
  EXPECT_EQ(node_mac({3, 7}).to_string(), "02:00:00:00:03:07");
  EXPECT_THROW(node_ip({256, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace mfft
