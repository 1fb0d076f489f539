#!/usr/bin/env python3
"""Regenerates the bundled toy corpus and toy lexicons under resources/.

The toy data is committed; this script exists so it can be rebuilt or
extended. It checks that every intended sentence triple clears the default
0.7 cosine threshold on all three level pairings before writing anything.
"""
import math
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
RES = os.path.join(HERE, "..", "resources")


def h(word):
    v = 2166136261
    for c in word.encode():
        v = ((v ^ c) * 16777619) & 0xFFFFFFFF
    return v

# Each entry: (adv, int, ele) with a parallel tree per sentence.
# Deletion-style simplification keeps the cosine overlap high.


def np(det, adj, noun):
    toks = [(det, "DT")] + ([(adj, "JJ")] if adj else []) + [(noun, "NN")]
    inner = " ".join(f"({t} {w})" for w, t in toks)
    words = [w for w, _ in toks]
    return f"(NP {inner})", words


def pp(prep, det, adj, noun):
    npp, words = np(det, adj, noun)
    return f"(PP (IN {prep}) {npp})", [prep] + words


def adv_phrase(word):
    return f"(ADVP (RB {word}))", [word]


def sentence(subj, verb, obj=None, preps=(), advp=None):
    """subj/obj: (det, adj, noun); preps: list of (prep, det, adj, noun)."""
    subj_t, subj_w = np(*subj)
    vp_parts = [f"(VBD {verb})"]
    words = subj_w + [verb]
    if obj:
        obj_t, obj_w = np(*obj)
        vp_parts.append(obj_t)
        words += obj_w
    for p in preps:
        pp_t, pp_w = pp(*p)
        vp_parts.append(pp_t)
        words += pp_w
    if advp:
        advp_t, advp_w = adv_phrase(advp)
        vp_parts.append(advp_t)
        words += advp_w
    tree = f"(ROOT (S {subj_t} (VP {' '.join(vp_parts)})))"
    text = " ".join(words) + "."
    text = text[0].upper() + text[1:]
    return text, tree


def triple(noun, verb_a, verb_e, obj_noun, place, adj_a=None, adj_i=None,
           time_a=None):
    """Deletion-style simplification: int drops the object adjective, ele
    additionally drops either the adverb or the subject adjective. Heavier
    rewrites would push the cross-level cosine below the 0.7 threshold at
    this sentence length."""
    drop_subject_adj = h(noun) % 2 == 0
    adv = sentence(("the", adj_a, noun), verb_a, ("the", adj_i, obj_noun),
                   [("near", "the", None, place)], time_a)
    mid = sentence(("the", adj_a, noun), verb_a, ("the", None, obj_noun),
                   [("near", "the", None, place)], time_a)
    if drop_subject_adj:
        ele = sentence(("the", None, noun), verb_a, ("the", None, obj_noun),
                       [("near", "the", None, place)], time_a)
    else:
        ele = sentence(("the", adj_a, noun), verb_a, ("the", None, obj_noun),
                       [("near", "the", None, place)])
    return adv, mid, ele


ART1 = [
    triple("storm", "flooded", "flooded", "village", "river", "violent", "northern", "yesterday"),
    triple("farmer", "harvested", "gathered", "wheat", "barn", "elderly", "golden", "quickly"),
    triple("teacher", "explained", "explained", "lesson", "window", "patient", "difficult", "slowly"),
    triple("crowd", "watched", "watched", "parade", "station", "enormous", "colorful", "silently"),
    triple("doctor", "examined", "checked", "patient", "entrance", "careful", "nervous", "today"),
    triple("artist", "painted", "painted", "portrait", "harbor", "famous", "gloomy", "outside"),
    triple("mayor", "announced", "announced", "budget", "hall", "worried", "annual", "reluctantly"),
    triple("scientist", "measured", "measured", "glacier", "summit", "curious", "shrinking", "carefully"),
    triple("children", "planted", "planted", "garden", "school", "cheerful", "tiny", "together"),
    triple("librarian", "repaired", "fixed", "bookshelf", "stairs", "quiet", "wooden", "patiently"),
]

ART2 = [
    triple("miner", "discovered", "found", "tunnel", "mountain", "exhausted", "hidden", "finally"),
    triple("sailor", "repaired", "fixed", "engine", "lighthouse", "young", "broken", "overnight"),
    triple("baker", "prepared", "made", "bread", "market", "skillful", "fresh", "early"),
    triple("journalist", "reported", "reported", "protest", "square", "fearless", "peaceful", "immediately"),
    triple("grandmother", "described", "told", "story", "fireplace", "gentle", "ancient", "softly"),
    triple("engineer", "inspected", "checked", "bridge", "canyon", "serious", "rusty", "thoroughly"),
    triple("musician", "composed", "wrote", "melody", "theater", "blind", "joyful", "gradually"),
    triple("hunter", "followed", "followed", "wolf", "forest", "silent", "grey", "northward"),
    triple("nurse", "comforted", "helped", "soldier", "tent", "tired", "wounded", "kindly"),
    triple("merchant", "counted", "counted", "coins", "doorway", "greedy", "silver", "twice"),
]

# One unalignable sentence per level per article.
EXTRA = {
    "adv": sentence(("the", "restless", "ocean"), "swallowed",
                    ("the", "abandoned", "pier"), [("near", "the", None, "cliffs")],
                    "relentlessly"),
    "int": sentence(("the", "hungry", "fox"), "raided", ("the", None, "henhouse"),
                    [("near", "the", None, "fence")], "nightly"),
    "ele": sentence(("the", None, "moon"), "lit", ("the", None, "path"),
                    [("near", "the", None, "lake")]),
}

# Substitution-only pairs: same length and syntax, one word swapped, so
# only the lexicon features can tell the levels apart. The last pair is
# deliberately contradictory (the simpler version carries the rarer verb)
# to keep the toy evaluation numbers off the ceiling.
def subst_pair(subj, verb_hard, verb_easy, obj, place, subj_adj=None, obj_adj_hard=None,
               obj_adj_easy=None):
    hard = sentence(("the", subj_adj, subj), verb_hard,
                    ("the", obj_adj_hard, obj), [("near", "the", None, place)])
    easy = sentence(("the", subj_adj, subj), verb_easy,
                    ("the", obj_adj_easy if obj_adj_hard else None, obj),
                    [("near", "the", None, place)])
    return hard, easy


WIKI_SUBST = [
    subst_pair("merchant", "acquired", "bought", "mirror", "gate", "shrewd",
               "silver", "silver"),
    subst_pair("tourist", "photographed", "filmed", "fortress", "cliffs",
               "curious", "ancient", "ancient"),
    subst_pair("vessel", "entered", "entered", "port", "canal", None,
               "colossal", "big"),
    subst_pair("shepherd", "escorted", "led", "flock", "ravine", "anxious",
               "weary", "weary"),
    subst_pair("composer", "performed", "rendered", "finale", "balcony",
               "solemn", None, None),
]

WIKI = [
    triple("volcano", "destroyed", "destroyed", "town", "coast", "dormant", "coastal", "suddenly"),
    triple("senator", "proposed", "suggested", "law", "capitol", "veteran", "controversial", "formally"),
    triple("river", "carved", "carved", "canyon", "desert", "mighty", "deep", "slowly"),
    triple("company", "released", "released", "telephone", "factory", "ambitious", "portable", "worldwide"),
    triple("empire", "conquered", "took", "island", "strait", "powerful", "fortified", "eventually"),
    triple("astronomer", "observed", "watched", "comet", "observatory", "meticulous", "distant", "nightly"),
    triple("architect", "designed", "planned", "cathedral", "plaza", "visionary", "gothic", "boldly"),
    triple("professor", "translated", "translated", "manuscript", "archive", "retired", "medieval", "faithfully"),
    triple("explorer", "crossed", "crossed", "desert", "oasis", "stubborn", "endless", "alone"),
    triple("committee", "approved", "approved", "treaty", "border", "divided", "historic", "narrowly"),
    triple("biologist", "studied", "studied", "coral", "reef", "devoted", "bleached", "underwater"),
    triple("poet", "published", "published", "collection", "cafe", "unknown", "melancholy", "anonymously"),
]


def tokenize(text):
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum() or ch in "-'":
            cur.append(ch)
        else:
            if cur:
                out.append("".join(cur).strip("-'"))
            cur = []
    if cur:
        out.append("".join(cur).strip("-'"))
    return [t for t in out if t]


def cosine_sims(sents_a, sents_b):
    ta = [tokenize(s) for s in sents_a]
    tb = [tokenize(s) for s in sents_b]
    n = len(ta) + len(tb)
    df = {}
    for toks in ta + tb:
        for t in set(toks):
            df[t] = df.get(t, 0) + 1

    def vec(toks):
        tf = {}
        for t in toks:
            tf[t] = tf.get(t, 0) + 1
        return {t: c * math.log(n / df[t]) for t, c in tf.items() if df[t] < n}

    va, vb = [vec(t) for t in ta], [vec(t) for t in tb]

    def cos(u, v):
        dot = sum(w * v.get(t, 0.0) for t, w in u.items())
        nu = math.sqrt(sum(w * w for w in u.values()))
        nv = math.sqrt(sum(w * w for w in v.values()))
        return 0.0 if nu == 0 or nv == 0 else dot / (nu * nv)

    return [[cos(u, v) for v in vb] for u in va]


def check_article(name, triples, extra=True):
    adv = [t[0][0] for t in triples]
    mid = [t[1][0] for t in triples]
    ele = [t[2][0] for t in triples]
    if extra:
        adv.append(EXTRA["adv"][0])
        mid.append(EXTRA["int"][0])
        ele.append(EXTRA["ele"][0])
    ok = True
    for pair_name, (a, b) in {"adv-int": (adv, mid), "int-ele": (mid, ele),
                              "adv-ele": (adv, ele)}.items():
        sims = cosine_sims(a, b)
        for i in range(len(triples)):
            if sims[i][i] < 0.7:
                print(f"{name} {pair_name} triple {i}: sim {sims[i][i]:.3f} < 0.7")
                ok = False
    return ok


def check_wiki():
    normal = [t[0][0] for t in WIKI] + [p[0][0] for p in WIKI_SUBST]
    simple = [t[2][0] for t in WIKI] + [p[1][0] for p in WIKI_SUBST]
    sims = cosine_sims(normal, simple)
    ok = True
    for i in range(len(normal)):
        if sims[i][i] < 0.7:
            print(f"wiki pair {i}: sim {sims[i][i]:.3f} < 0.7")
            ok = False
    return ok


def write_article(dirname, stem, rows):
    os.makedirs(dirname, exist_ok=True)
    with open(os.path.join(dirname, stem + ".txt"), "w") as f:
        f.write("\n".join(r[0] for r in rows) + "\n")
    with open(os.path.join(dirname, stem + ".trees"), "w") as f:
        f.write("\n".join(r[1] for r in rows) + "\n")


# ---------------------------------------------------------------------
# Lexicons: plausible toy norms keyed off the corpus vocabulary. Values
# follow a crude difficulty model so the rankers have real signal.

EASY = {"storm", "village", "river", "wheat", "barn", "lesson", "window",
        "parade", "station", "patient", "garden", "school", "bread", "market",
        "story", "bridge", "wolf", "forest", "soldier", "tent", "coins", "town",
        "coast", "law", "island", "desert", "path", "lake", "moon", "fox",
        "fence", "children", "teacher", "doctor", "farmer", "mayor", "engine",
        "mountain", "tunnel", "helped", "made", "found", "told", "fixed",
        "took", "watched", "checked", "crossed", "counted", "planted",
        "flooded", "followed", "lit", "wrote", "gathered", "bought", "filmed",
        "led", "performed", "big", "mirror", "gate", "tourist", "port",
        "canal", "shepherd", "flock", "entered"}

HARD = {"glacier", "summit", "portrait", "harbor", "budget", "bookshelf",
        "lighthouse", "protest", "square", "fireplace", "canyon", "melody",
        "theater", "doorway", "capitol", "strait", "comet", "observatory",
        "cathedral", "plaza", "manuscript", "archive", "oasis", "treaty",
        "border", "coral", "reef", "collection", "cafe", "telephone",
        "factory", "pier", "cliffs", "henhouse", "librarian", "journalist",
        "grandmother", "astronomer", "architect", "professor", "explorer",
        "committee", "biologist", "merchant", "musician", "scientist",
        "volcano", "senator", "empire", "harvested", "explained", "examined",
        "announced", "measured", "repaired", "discovered", "prepared",
        "reported", "described", "inspected", "composed", "comforted",
        "proposed", "carved", "released", "conquered", "observed", "designed",
        "translated", "approved", "studied", "published", "swallowed",
        "raided", "painted", "destroyed", "suggested", "planned", "acquired",
        "photographed", "escorted", "rendered", "colossal", "shrewd",
        "anxious", "weary", "fortress", "ravine", "composer", "finale",
        "balcony", "vessel"}


def spread(word, lo, hi, decimals=2):
    return round(lo + (h(word) % 1000) / 999.0 * (hi - lo), decimals)


def write_lexicons(words):
    os.makedirs(os.path.join(RES, "lexicons"), exist_ok=True)
    content = sorted(w for w in words
                     if w not in {"the", "near"} and len(w) > 2)

    def emit(name, fn, header="word\tvalue"):
        with open(os.path.join(RES, "lexicons", name + ".tsv"), "w") as f:
            f.write(header + "\n")
            for w in content:
                f.write(fn(w) + "\n")

    def difficulty(w):
        if w in EASY:
            return 0.0
        if w in HARD:
            return 1.0
        return 0.5

    emit("aoa", lambda w: f"{w}\t{spread(w, 3.0, 6.5) + 5.0 * difficulty(w):.2f}")
    emit("imagery", lambda w: f"{w}\t{spread(w, 300, 450) + 150 * (1 - difficulty(w)):.1f}")
    emit("familiarity", lambda w: f"{w}\t{spread(w, 350, 480) + 140 * (1 - difficulty(w)):.1f}")
    emit("meaningfulness", lambda w: f"{w}\t{spread(w, 280, 420) + 90 * (1 - difficulty(w)):.1f}")
    emit("concreteness", lambda w: f"{w}\t{spread(w, 300, 500) + 80 * (1 - difficulty(w)):.1f}")
    emit("senses", lambda w: f"{w}\t{1 + h(w) % 5 + (3 if w in EASY else 0)}")
    emit("celex",
         lambda w: f"{w}\t{1 + h(w) % 3 + (1 if w in HARD else 0)}\t{h(w) % 2}\t{1 + h(w + 'f') % 5}",
         header="word\tcomplexity\tcompound\tfrequency_class")
    return len(content)


def main():
    ok = check_article("art1", ART1) and check_article("art2", ART2)
    ok = check_wiki() and ok
    if not ok:
        print("similarity check failed; not writing")
        return 1

    ose = os.path.join(RES, "toy", "ose")
    for stem, rows in {
        "art1_adv": [t[0] for t in ART1] + [EXTRA["adv"]],
        "art1_int": [t[1] for t in ART1] + [EXTRA["int"]],
        "art1_ele": [t[2] for t in ART1] + [EXTRA["ele"]],
        "art2_adv": [t[0] for t in ART2] + [EXTRA["adv"]],
        "art2_int": [t[1] for t in ART2] + [EXTRA["int"]],
        "art2_ele": [t[2] for t in ART2] + [EXTRA["ele"]],
    }.items():
        write_article(ose, stem, rows)

    wiki = os.path.join(RES, "toy", "wiki")
    write_article(wiki, "wiki_normal",
                  [t[0] for t in WIKI] + [p[0] for p in WIKI_SUBST])
    write_article(wiki, "wiki_simple",
                  [t[2] for t in WIKI] + [p[1] for p in WIKI_SUBST])

    words = set()
    for rows in [ART1, ART2, WIKI, WIKI_SUBST]:
        for t in rows:
            for s, _tree in t:
                words.update(tokenize(s))
    for s, _tree in EXTRA.values():
        words.update(tokenize(s))
    n = write_lexicons(words)
    print(f"wrote toy corpus ({len(ART1)}+{len(ART2)} triples, {len(WIKI)} wiki pairs), "
          f"{n} lexicon words")
    return 0


if __name__ == "__main__":
    sys.exit(main())
