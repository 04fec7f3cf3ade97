# Generates the synthetic 32-node / 460-message stand-in log and its planted labels.
# Four planted groups, ~85% intra-group traffic, timestamps spread over 210 days.
import random, datetime
rng = random.Random(1978)
groups = [list(range(1,10)), list(range(10,18)), list(range(18,26)), list(range(26,33))]
label = {n: "ABCD"[g] for g, ms in enumerate(groups) for n in ms}
ties = []
for ms in groups:
    for i in range(len(ms)):
        for j in range(i+1, len(ms)):
            if rng.random() < 0.55:
                ties.append((ms[i], ms[j], rng.choice([1,2,3,4])))
    # ensure every member has a tie
    for m in ms:
        if not any(m in t[:2] for t in ties):
            o = rng.choice([x for x in ms if x != m]); ties.append((m, o, 2))
inter = []
while len(inter) < 10:
    a, b = rng.sample(range(1,33), 2)
    if label[a] != label[b]:
        inter.append((a, b, 1))
ties += inter
weights = [t[2] for t in ties]
start = datetime.datetime(1978, 2, 1)
span = 210*24*3600
rows = []
for k in range(460):
    a, b, _ = rng.choices(ties, weights)[0]
    if rng.random() < 0.5: a, b = b, a
    ts = start + datetime.timedelta(seconds=rng.randrange(span))
    rows.append((ts, a, b, rng.randint(20, 900)))
rows.sort()
assert len({x for r in rows for x in r[1:3]}) == 32
with open("/root/crate/data/eies_synthetic.csv", "w") as f:
    f.write("# sender,receiver,timestamp,characters\n")
    for ts, a, b, c in rows:
        f.write(f"{a},{b},{ts:%Y-%m-%d %H:%M:%S},{c}\n")
with open("/root/crate/data/eies_synthetic_truth.csv", "w") as f:
    f.write("# node_id,label\n")
    for n in range(1,33): f.write(f"{n},{label[n]}\n")
print(len(rows), len(ties))
