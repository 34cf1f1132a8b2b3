"""Document model: offset tokens, sentence splitting, topic paragraphs.

Builds a small two-topic document (ransomware vocabulary, then phishing
vocabulary) and shows the TextTiling block comparison finding the seam.
"""

from cyents.textcorpus import TilingParams, build_document, gap_scores, tokenize

TOPIC_1 = [
    "The ransomware encrypts volumes and demands payment in crypto wallets.",
    "Encrypted hosts display ransom notes while backups are wiped by the payload.",
    "Analysts traced the encryption keys to wallets used by this ransomware family.",
    "Recovery teams restore volumes from backups after the ransom deadline passes.",
    "Payment rarely restores encrypted data because keys are discarded by payloads.",
    "The wallets collecting ransom payments moved crypto through mixers overnight.",
    "Backups kept offline survive the encryption wave that hits mounted volumes.",
    "The ransom notes name a deadline and a wallet for crypto payment.",
    "Keys leak occasionally and decryption tools restore a fraction of the volumes.",
    "The family rotates wallets between campaigns to launder ransom crypto faster.",
]
TOPIC_2 = [
    "Phishing lures impersonate invoices to harvest mailbox credentials from staff.",
    "The lures arrive as emails with spoofed senders and urgent credential prompts.",
    "Harvested credentials feed account takeover and mailbox forwarding rules.",
    "Staff who click the lures land on portals that mimic the mailbox login.",
    "Awareness training cuts the credential submission rate on simulated lures.",
    "Spoofed senders and lookalike portals defeat casual inspection of emails.",
    "Takeover of one mailbox seeds internal phishing against the whole staff.",
    "Forwarding rules exfiltrate invoices and credential resets to the attacker.",
    "Portals rotate domains daily so mailbox filters lag behind the lures.",
    "Simulated phishing measures how many staff submit credentials each quarter.",
]

text = " ".join(TOPIC_1 + TOPIC_2)

# the default window of 20 tokens suits article-length text; for a short
# 20-sentence note, smaller windows keep enough blocks to compare
params = TilingParams(window_w=10, block_k=3)
doc = build_document("demo", text, params=params)

print(f"{len(tokenize(text))} tokens, {len(doc.sentences)} sentences")
print("tokenizer keeps patterns whole:",
      [t.surface for t in tokenize("Probe 10.0.0.1 re CVE-2021-44228.")])

scores, windows = gap_scores(text, params)
print(f"\n{len(windows)} pseudo-sentence windows; gap cosine profile:")
print("  " + " ".join(f"{s:.2f}" for s in scores))

print("\nparagraph sentence ranges:", doc.paragraphs)
for start, end in doc.paragraphs:
    first = doc.sentence_text(start)
    print(f"  [{start:2d},{end:2d})  {first[:60]}...")

print("\nThe major seam sits at sentence 10, where the vocabulary flips from")
print("ransom/wallets/backups to lures/credentials/mailboxes; the smaller")
print("splits are subtopic shifts, which block comparison also reacts to.")
