#!/usr/bin/env python3
"""Generate the bundled demo corpora in data/demo/.

happy.jsonl  - 200 labeled-positive "happy moment" sentences
mixed.jsonl  - 2,000 unlabeled sentences from depression and control users,
               roughly a third of them happy moments

Sentences are produced from templates with hand-assigned lemmas and POS tags,
so the files need no tagger. Output is fully determined by --seed.
"""

import argparse
import json
import random
from pathlib import Path

# surface -> (lemma, pos). Words missing here default to (lower, OTHER).
LEXICON = {}


def words(pos, *entries):
    for e in entries:
        if "/" in e:
            surface, lemma = e.split("/")
        else:
            surface, lemma = e, e.lower()
        LEXICON[surface] = (lemma, pos)


words("PRON", "I/i", "me", "my", "we", "us", "our", "it", "he", "she", "they", "them",
      "anyone", "someone", "nothing", "everyone", "you", "your", "mine", "Our/our", "My/my",
      "It/it", "We/we", "She/she", "He/he", "her")
words("NOUN", "friend", "friends/friend", "buddy", "mate", "neighbor", "girlfriend", "boyfriend",
      "mom", "dad", "sister", "brother", "son", "daughter", "family", "grandma", "cousin",
      "song", "songs/song", "band", "music", "concert", "album", "guitar", "playlist",
      "nap", "bed", "sleep", "dream", "night",
      "show", "movie", "episode", "series", "video", "tv",
      "money", "paycheck", "rent", "bonus", "raise", "salary", "savings",
      "game", "team", "match", "gym", "race", "boss",
      "skin", "eye", "breath", "church", "god",
      "pizza", "piece", "cake", "dinner", "coffee", "gift", "letter", "cat", "dog", "puppy",
      "trip", "beach", "park", "garden", "book", "job", "promotion", "work", "car", "bike",
      "controller", "laptop", "phone", "printer", "heater", "report", "meeting", "office",
      "traffic", "bus", "weather", "policy", "form", "deadline", "email", "bill", "landlord",
      "week", "weekend", "morning", "day", "time", "home", "store", "shop", "vacation",
      "Monday/monday", "Friday/friday", "hug", "love", "kiss", "tournament", "level",
      "hours/hour", "ticket", "tickets/ticket", "lunch", "walk", "city",
      "question", "problem", "update", "account", "password", "answer", "train")
words("VERB", "went/go", "go", "visited/visit", "called/call", "hugged/hug", "cuddled/cuddle",
      "listened/listen", "sang/sing", "played/play", "watched/watch", "won/win", "got/get",
      "bought/buy", "ate/eat", "cooked/cook", "felt/feel", "feel", "loved/love", "love",
      "slept/sleep", "woke/wake", "dreamed/dream", "saw/see", "met/meet", "made/make",
      "finished/finish", "built/build", "ran/run", "trained/train", "paid/pay", "saved/save",
      "invested/invest", "beat", "laughed/laugh", "cried/cry", "surprised/surprise",
      "gave/give", "adopted/adopt", "baked/bake", "need/need", "fix", "is/be", "was/be",
      "are/be", "have/have", "has/have", "know", "stopped/stop", "working/work", "helps/help",
      "explain", "closed/close", "finish", "reset", "update", "renew", "late", "install",
      "came/come", "spent/spend", "started/start", "learned/learn", "opened/open",
      "Does/do", "Can/can", "can", "does/do", "am/be", "think", "works/work", "lead", "led/lead",
      "organized/organize", "worked/work", "moved/move", "keeps/keep", "crashed/crash",
      "answered/answer", "loves/love", "talked/talk", "took/take", "watching/watch", "had/have")
words("ADJ", "new", "good", "great", "happy", "favorite", "amazing", "long", "old", "best",
      "first", "final", "last", "cold", "grey", "terrible", "tired", "late", "closed",
      "whole", "little", "free", "big", "warm", "quiet", "funny", "broken", "slow", "annual")
words("ADV", "yesterday", "today", "finally", "together", "again", "perfectly", "really",
      "tonight", "recently", "ago", "still", "here", "early")

FRIENDS = ["friend", "friends", "buddy", "girlfriend", "boyfriend", "neighbor", "mate"]
FAMILY = ["mom", "dad", "sister", "brother", "son", "daughter", "family", "grandma", "cousin"]
MUSIC = ["song", "band", "album", "playlist", "concert"]
TV = ["show", "movie", "series", "episode", "video"]
MONEY = ["bonus", "raise", "paycheck", "promotion"]
THINGS = ["laptop", "phone", "bike", "controller", "car"]
BROKEN = ["printer", "heater", "laptop", "phone", "car"]
DAYS = ["Monday", "Friday"]
WHEN = ["yesterday", "today", "tonight", "recently"]

# Each happy template is tagged with the topics it draws on.
HAPPY_TEMPLATES = {
    "social": [
        "I went to the park with my {FRIEND} {WHEN} .",
        "My {FRIEND} surprised me with a gift {WHEN} .",
        "I hugged my {FRIEND} and we laughed together .",
        "I met my old {FRIEND} for coffee and it was great .",
    ],
    "family": [
        "I visited my {FAM} {WHEN} .",
        "My {FAM} called me and we talked for hours .",
        "My {FAM} cooked a great dinner for the whole family .",
        "I cuddled with my {FAM} and felt really happy .",
    ],
    "music": [
        "I listened to my favorite {MUSIC} and felt great .",
        "We sang our favorite song together at the concert .",
        "I played guitar with my band {WHEN} .",
    ],
    "sleep": [
        "I finally got a good sleep {WHEN} .",
        "I slept in and woke up to a quiet morning .",
        "I took a long nap and had a happy dream .",
    ],
    "self": [
        "I finally feel good about my work .",
        "I felt happy and free for the first time .",
    ],
    "tv": [
        "I watched a new {TV} {WHEN} and loved it .",
        "We watched the final episode of our favorite series .",
        "I spent the weekend watching a funny {TV} .",
    ],
    "money": [
        "I got a {MONEY} at work {WHEN} .",
        "I paid the rent early and saved money .",
        "I invested my savings and made money .",
    ],
    "sports": [
        "Our team won the game {WHEN} .",
        "I ran my first race and finished it .",
        "I trained at the gym and beat my best time .",
        "I built a new bike and ran a long race .",
    ],
    "games": [
        "I finally beat the last level of the game .",
        "I beat the final level and won the tournament .",
        "Our team won the tournament {WHEN} .",
    ],
    "things": [
        "I bought a new {THING} and it works perfectly .",
        "I adopted a cat and she loves her new home .",
        "I cooked a warm dinner and ate it in the garden .",
        "I baked a cake and everyone loved it .",
        "I went on a trip to the beach {WHEN} .",
    ],
}

NEUTRAL_TEMPLATES = [
    "The office is closed on {DAY} .",
    "I need to fix the {BROKEN} before {DAY} .",
    "Does anyone know how to reset the {BROKEN} ?",
    "The traffic was terrible this morning .",
    "I have to finish the report by {DAY} .",
    "My {BROKEN} stopped working again .",
    "I feel tired and nothing helps .",
    "The weather is cold and grey today .",
    "Can someone explain the new policy ?",
    "The bus was late again .",
    "I need to renew my account password .",
    "The meeting was moved to {DAY} .",
    "My landlord still has not answered my email .",
    "I think the update crashed my {BROKEN} .",
    "The store is closed on {DAY} .",
    "I have a question about the annual bill .",
]

# Topic weights for the happy moments of each subgroup.
TOPIC_WEIGHTS = {
    "positive": {"social": 2, "family": 2, "music": 1, "sleep": 1, "self": 1, "tv": 2,
                 "money": 2, "sports": 2, "games": 1, "things": 3},
    "depression": {"social": 5, "family": 5, "music": 3, "sleep": 3, "self": 3, "tv": 1,
                   "money": 1, "sports": 1, "games": 1, "things": 2},
    "control": {"social": 1, "family": 1, "music": 1, "sleep": 1, "self": 1, "tv": 5,
                "money": 5, "sports": 4, "games": 3, "things": 2},
}


def fill(template, rng):
    out = []
    for piece in template.split():
        slot = {"{FRIEND}": FRIENDS, "{FAM}": FAMILY, "{MUSIC}": MUSIC, "{TV}": TV,
                "{MONEY}": MONEY, "{THING}": THINGS, "{BROKEN}": BROKEN, "{DAY}": DAYS,
                "{WHEN}": WHEN}.get(piece)
        out.append(rng.choice(slot) if slot else piece)
    return out


def annotate(pieces):
    tokens = []
    for p in pieces:
        lemma, pos = LEXICON.get(p, (p.lower(), "OTHER"))
        tokens.append({"surface": p, "lemma": lemma, "pos": pos})
    text = ""
    for p in pieces:
        if p in {".", "?", "!", ","}:
            text += p
        else:
            text += (" " if text else "") + p
    return text, tokens


def happy_sentence(rng, weights):
    topics = list(weights)
    topic = rng.choices(topics, weights=[weights[t] for t in topics])[0]
    return annotate(fill(rng.choice(HAPPY_TEMPLATES[topic]), rng))


def record(rid, user, source, subgroup, text, tokens):
    return {"id": rid, "user_id": user, "pu_source": source, "subgroup": subgroup,
            "text": text, "tokens": tokens, "embedding": None}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "demo"))
    ap.add_argument("--seed", type=int, default=2022)
    ap.add_argument("--positives", type=int, default=200)
    ap.add_argument("--mixed", type=int, default=2000)
    ap.add_argument("--happy-share", type=float, default=0.35)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "happy.jsonl", "w", encoding="utf-8") as f:
        for i in range(args.positives):
            text, tokens = happy_sentence(rng, TOPIC_WEIGHTS["positive"])
            rec = record(f"h{i:05d}", f"hdb{i % 50:03d}", "labeled_positive", None, text, tokens)
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")

    users = [("depression", f"d{u:02d}") for u in range(1, 21)] + \
            [("control", f"c{u:02d}") for u in range(1, 41)]
    with open(out / "mixed.jsonl", "w", encoding="utf-8") as f:
        for i in range(args.mixed):
            group, user = users[i % len(users)]
            if rng.random() < args.happy_share:
                text, tokens = happy_sentence(rng, TOPIC_WEIGHTS[group])
            else:
                text, tokens = annotate(fill(rng.choice(NEUTRAL_TEMPLATES), rng))
            rec = record(f"m{i:05d}", user, "unlabeled", group, text, tokens)
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
