"""One-time generator for regex_cases.tsv.

Expected outcomes are derived from first-principle validators (stdlib
ipaddress parsing, hex/length checks, integer ranges, structural splits),
never from the recognizers under test.  Run once, inspect the output, and
freeze it; the test suite reads the TSV.
"""

import ipaddress
from pathlib import Path

OUT = Path(__file__).parent / "regex_cases.tsv"


def ipv4_ok(s):
    try:
        ipaddress.IPv4Address(s)
        return True
    except ValueError:
        return False


def ipv6_ok(s):
    try:
        ipaddress.IPv6Address(s)
        return True
    except ValueError:
        return False


def hash_ok(s):
    return len(s) in (32, 40, 64) and all(c in "0123456789abcdefABCDEF" for c in s)


def cve_ok(s):
    parts = s.split("-")
    return (
        len(parts) == 3
        and parts[0].upper() == "CVE"
        and parts[1].isdigit() and len(parts[1]) == 4
        and parts[2].isdigit() and 4 <= len(parts[2]) <= 7
    )


def port_ok(v):
    return 0 <= int(v) <= 65535


def email_ok(s):
    if s.count("@") != 1:
        return False
    local, domain = s.split("@")
    if not local or any(c not in "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._%+-" for c in local):
        return False
    labels = domain.split(".")
    if len(labels) < 2 or any(not lab for lab in labels):
        return False
    return labels[-1].isalpha() and len(labels[-1]) >= 2


def url_ok(s):
    for scheme in ("http://", "https://", "ftp://"):
        if s.lower().startswith(scheme) and len(s) > len(scheme):
            return True
    return False


cases = []


def case(text, label, expected):
    cases.append((text, label, expected))


def embed(candidate, label, ok, template="seen at {} today"):
    text = template.format(candidate)
    case(text, label, candidate if ok else "-")


# --- IPv4: valid sweep over octet classes, then out-of-range and malformed
valid_v4 = [
    "0.0.0.0", "255.255.255.255", "1.2.3.4", "9.9.9.9", "10.0.0.1",
    "99.88.77.66", "100.101.102.103", "172.16.254.3", "192.168.1.1",
    "199.200.249.250", "203.0.113.7", "224.0.0.251", "240.1.2.3",
    "8.8.8.8", "127.0.0.1", "169.254.0.9", "198.51.100.42", "25.24.23.22",
    "249.199.99.9", "205.214.224.234",
]
for s in valid_v4:
    embed(s, "IP_Address", ipv4_ok(s))

invalid_v4 = [
    "256.1.1.1", "999.1.1.1", "1.2.3.456", "1.256.3.4", "1.2.300.4",
    "300.300.300.300", "1.2.3", "1.2", "1.2.3.4.5", "10.1.2.3.4",
    "01.2.3.4", "1.02.3.4", "1.2.3.04", "1..2.3.4", "1.2..3.4",
    "1.2.3.", ".1.2.3.4", "1.2.3.4a", "a1.2.3.4", "1-2-3-4",
]
for s in invalid_v4:
    embed(s, "IP_Address", ipv4_ok(s.strip(".")) and False or ipv4_ok(s))

# --- IPv6
valid_v6 = [
    "::1", "fe80::1", "2001:db8::ff00:42:8329",
    "2001:0db8:85a3:0000:0000:8a2e:0370:7334", "::ffff:192.0.2.128",
    "2001:db8::", "ff02::fb", "2001:db8:0:1:1:1:1:1",
    "cafe:babe::dead:beef", "abcd:ef01:2345:6789:abcd:ef01:2345:6789",
]
for s in valid_v6:
    embed(s, "IP_Address", ipv6_ok(s))

invalid_v6 = [
    "12:30:45", "aa:bb:cc:dd:ee:ff", "2001:db8:::1", "1:2:3:4:5:6:7:8:9",
    "abcd:efgh::1", "1:2", ":::", "2001:db8:85a3:0:0:8a2e:370g:7334",
    "9:30", "00:11:22:33:44:55",
]
for s in invalid_v6:
    embed(s, "IP_Address", ipv6_ok(s))

# --- hashes: length sweep around 32/40/64 plus casing and contamination
base = "0123456789abcdef" * 5  # 80 hex chars to slice from
for n in (30, 31, 32, 33, 39, 40, 41, 63, 64, 65):
    s = base[:n]
    embed(s, "Hash", hash_ok(s), template="dropped sample {} on disk")
for n in (32, 40, 64):
    s = base[:n].upper()
    embed(s, "Hash", hash_ok(s), template="digest {} recorded")
tainted = [
    "g" + base[:31],                 # non-hex leading char, 32 long
    base[:31] + "z",                 # non-hex trailing char
    base[:16] + "q" + base[:15],     # non-hex in the middle
    "x" + base[:32],                 # valid 32 prefixed by a letter
    base[:32] + "9",                 # 33 hex chars
    base[:40] + "ff",                # 42 hex chars
]
for s in tainted:
    embed(s, "Hash", hash_ok(s), template="artifact {} flagged")

# --- CVE ids
valid_cve = [
    "CVE-2021-44228", "CVE-2014-0160", "CVE-2017-0144", "CVE-1999-0001",
    "CVE-2021-4422812", "cve-2017-5638", "Cve-2019-0708", "CVE-2020-1472",
    "CVE-2016-10033", "CVE-2018-112233", "CVE-2023-1234567", "cve-2022-0001",
]
for s in valid_cve:
    embed(s, "CVE", cve_ok(s), template="patched {} last week")
invalid_cve = [
    "CVE-21-1234", "CVE-2021-123", "CVE-2021-12345678", "CVE20211234",
    "CVE-2021-", "CVE--1234", "CVE-2021-abcd", "XCVE-2021-44228",
    "CVE-202-1234", "CVE-20211-1234", "cve-2021", "VULN-2021-44228",
]
for s in invalid_cve:
    embed(s, "CVE", cve_ok(s), template="mentioned {} in passing")

# --- ports: trigger-word rule, range bounds, ip:port form
for v in ("0", "1", "21", "22", "80", "443", "1024", "8080", "49152", "65534", "65535"):
    case(f"listens on port {v} now", "Port", v if port_ok(v) else "-")
for v in ("65536", "70000", "99999"):
    case(f"listens on port {v} now", "Port", v if port_ok(v) else "-")
case("ports 80 and more", "Port", "80")
case("Port 8080 open", "Port", "8080")
case("PORTS 445 exposed", "Port", "445")
case("on 443 without trigger", "Port", "-")
case("a passport 443 case", "Port", "-")
case("port eighty", "Port", "-")
case("connects to 10.0.0.5:3389 now", "Port", "3389")
case("connects to 10.0.0.5:3389 now", "IP_Address", "10.0.0.5")
case("beacon to 1.2.3.4:65536 stays unlabeled", "Port", "-")
case("saw 1.2.3.4:443 twice", "Port", "443")

# --- emails
valid_email = [
    "bob@example.com", "alice.smith+tag@sub.example.co.uk", "user%x@host.org",
    "first.last@dept.company.io", "n0p3@malicious.net", "ops-team@example.travel",
    "a.b.c@d.e.fg", "UPPER@CASE.COM", "dot.ted@deep.sub.domain.example.com",
    "u_1@example.com", "x+y+z@example.org", "team@example.museum",
]
for s in valid_email:
    embed(s, "Email", email_ok(s), template="contact {} for details")
invalid_email = [
    "bob@localhost", "a@b.c", "@example.com", "plainaddress",
    "bob@@example.com", "bob@.com", "bob@com.", "bob at example.com",
    "bob@example..com", "bob@example.c0m",
]
for s in invalid_email:
    embed(s, "Email", email_ok(s), template="contact {} for details")

# --- URLs
valid_url = [
    "http://example.com", "https://example.com/path?q=1",
    "ftp://files.example.com/a.zip", "http://1.2.3.4/shell",
    "https://sub.domain.example.co.uk/long/path/here",
    "HTTP://UPPER.EXAMPLE.COM", "https://example.com:8443/admin",
    "http://example.com/a_(b)", "ftp://203.0.113.9/drop",
    "https://example.com/#frag", "http://xn--e1afmkfd.xn--p1ai/x",
    "https://example.com/q?a=1&b=2",
]
for s in valid_url:
    embed(s, "URL", url_ok(s), template="payload fetched from {} yesterday")
invalid_url = [
    "example.com", "www.example.com/path", "htp://x.com", "ssh://host",
    "//example.com", "http:/example.com", "http//example.com",
    "mailto:bob@example.com", "file:///etc/passwd", "gopher://old.example.org",
]
for s in invalid_url:
    embed(s, "URL", url_ok(s), template="payload fetched from {} yesterday")

# spec-named anchors, bare form
case("CVE-2021-44228", "CVE", "CVE-2021-44228")
case("999.1.1.1", "IP_Address", "-")
case("d41d8cd98f00b204e9800998ecf8427e", "Hash", "d41d8cd98f00b204e9800998ecf8427e")
case("listens on port 443", "Port", "443")

# --- extra coverage to round the suite out
more_v4_valid = ["11.22.33.44", "200.100.50.25", "254.253.252.251", "77.66.55.44", "123.45.67.89"]
for s in more_v4_valid:
    embed(s, "IP_Address", ipv4_ok(s), template="beacon at {} observed")
more_v4_invalid = ["1.2.3.999", "500.1.1.1", "1.500.1.1", "1.1.500.1", "12.34.56"]
for s in more_v4_invalid:
    embed(s, "IP_Address", ipv4_ok(s), template="beacon at {} observed")
case("exfil to 203.0.113.77. Next", "IP_Address", "203.0.113.77")
case("pivot via fe80::abcd. Later", "IP_Address", "fe80::abcd")
for n in (34, 38, 42, 62):
    s = base[:n]
    embed(s, "Hash", hash_ok(s), template="sample {} analyzed")
s = base[:64]
case(f"two digests {base[:32]} and {s} found", "Hash", base[:32])
for s in ("CVE-2024-99999", "CVE-2000-0001"):
    embed(s, "CVE", cve_ok(s), template="tracking {} now")
for s in ("CVE-2024-1", "2021-44228"):
    embed(s, "CVE", cve_ok(s), template="tracking {} now")
case("scan found port 1337 open", "Port", "1337")
case("ports 8443 responded", "Port", "8443")
case("port 655350 ignored", "Port", "-")
for s in ("security@vendor.example", "abuse@example.org"):
    embed(s, "Email", email_ok(s), template="report to {} asap")
for s in ("ftp.example.com", "https://"):
    embed(s, "Email", False, template="report to {} asap")
for s in ("https://cache.example.net/kit.js", "ftp://1.2.3.4:21/loot"):
    embed(s, "URL", url_ok(s), template="staged at {} briefly")
for s in ("telnet://old.example.com", "about:blank"):
    embed(s, "URL", url_ok(s), template="staged at {} briefly")

with open(OUT, "w", encoding="utf-8") as fh:
    fh.write("# text<TAB>label<TAB>expected surface ('-' = no mention of that label)\n")
    fh.write("# Frozen output of make_regex_cases.py; expectations derive from\n")
    fh.write("# stdlib/first-principle validators, not from the recognizers.\n")
    for text, label, expected in cases:
        assert "\t" not in text
        fh.write(f"{text}\t{label}\t{expected}\n")

print(f"wrote {len(cases)} cases to {OUT}")
