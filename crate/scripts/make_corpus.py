"""Writes data/corpus.json from the records below, filling the counts."""
import json, re, string, pathlib

PUNCT = string.punctuation + "‘’“”–—…«»"

def tokenize(t):
    out = []
    for w in t.split():
        w = w.strip(PUNCT).lower()
        if w:
            out.append(w)
    return out

R = [
("Technology",
 "Solar panels convert sunlight into electricity through the photovoltaic effect. Each cell contains layers of silicon that release electrons when photons strike them. Engineers arrange many cells into modules, and inverters transform the direct current into alternating current for household appliances. Efficiency has improved steadily, while manufacturing costs have fallen dramatically over two decades. Batteries now store surplus energy for cloudy evenings, making rooftop installations attractive for homeowners who want independence from the grid.",
 ["photovoltaic", "silicon", "electrons", "photons", "inverters", "household", "efficiency", "manufacturing", "dramatically"],
 "Solar modules turn daylight into electrical power using the photovoltaic process. Every cell holds thin silicon sheets that free charged particles when light hits them. Designers group cells into larger units, and converters change the current so home devices can use it. Performance keeps rising, and production expenses have dropped sharply across twenty years. Storage batteries keep extra power for overcast nights, which makes roof systems appealing to owners seeking freedom from utilities."),
("Technology",
 "Modern compilers translate human readable source code into efficient machine instructions. The frontend parses the program and builds an abstract syntax tree, while the optimizer rewrites intermediate representations to remove redundant computations. Register allocation decides which values stay in fast processor storage. Finally the backend emits assembly tailored to a specific architecture. Good diagnostics matter as much as speed, because programmers spend hours deciphering confusing error messages.",
 ["compilers", "parses", "syntax", "optimizer", "intermediate", "redundant", "allocation", "architecture", "diagnostics"],
 "Today's compilers turn source text written by people into fast machine code. The front stage reads the program and forms a syntax tree, and the optimizer reshapes intermediate forms to drop redundant work. A separate pass chooses which values live in quick processor slots. At the end, the back stage outputs assembly suited to one particular chip design. Clear warnings are as important as raw speed, since developers lose hours untangling puzzling errors."),
("History",
 "The printing press transformed European society during the fifteenth century. Before its invention, scribes copied manuscripts by hand, a slow and expensive craft. Movable metal type allowed workshops to produce hundreds of identical pages each day. Literacy spread through growing cities, and pamphlets carried religious controversy across borders with astonishing speed. Universities expanded their libraries, scholars corresponded more easily, and vernacular languages gained prestige alongside Latin.",
 ["printing", "scribes", "manuscripts", "movable", "workshops", "literacy", "pamphlets", "controversy", "astonishing"],
 "Mechanical printing reshaped life in Europe during the 1400s. Earlier, copyists reproduced books manually, which was costly and slow. Reusable metal letters let print shops turn out hundreds of matching sheets daily. Reading ability grew in expanding towns, and short tracts moved religious quarrels between countries remarkably fast. Colleges enlarged their collections, academics exchanged letters with less effort, and local tongues won respect next to Latin."),
("History",
 "The Silk Road was never a single highway but a shifting network of caravan routes linking China with the Mediterranean. Merchants exchanged silk, spices, porcelain and glassware, yet ideas travelled just as far as goods. Buddhism moved eastward along these paths, and papermaking techniques eventually reached Baghdad. Oasis cities such as Samarkand flourished by taxing traders and offering shelter. Bandits, deserts and shifting empires made every journey perilous.",
 ["caravan", "merchants", "porcelain", "glassware", "buddhism", "papermaking", "oasis", "samarkand", "perilous"],
 "The Silk Road was a changing web of caravan trails joining China to the Mediterranean rather than one road. Traders swapped silk, spices, fine porcelain and glass objects, and beliefs spread as widely as products. Buddhist teaching travelled east on these trails, and the craft of making paper finally arrived in Baghdad. Desert towns like Samarkand prospered by charging merchants and providing rest. Robbers, sand wastes and rising and falling states made each trip perilous."),
("Astronomy",
 "Neutron stars are the collapsed cores left behind when massive stars explode as supernovae. A teaspoon of their material would weigh billions of tons on Earth. Many spin rapidly and sweep beams of radiation across space, appearing to astronomers as pulsars with remarkably regular ticks. Their magnetic fields can be trillions of times stronger than our planet's field. Collisions between neutron stars produce gravitational waves and forge heavy elements like gold.",
 ["neutron", "collapsed", "supernovae", "teaspoon", "radiation", "pulsars", "remarkably", "magnetic", "gravitational"],
 "Neutron stars are the collapsed remnants that remain after giant stars blow apart as supernovae. A spoonful of this matter would weigh billions of tons here. Many rotate quickly and swing beams of energy through space, so observers see them as pulsars ticking with great regularity. Their magnetism may be trillions of times more intense than Earth's. When two of them merge they send out gravitational ripples in spacetime and create heavy metals such as gold."),
("Astronomy",
 "Comets are frozen remnants from the early solar system, made of ice, dust and rocky fragments. When one approaches the sun, sunlight vaporizes its surface and releases a glowing coma. Solar wind pushes the gas into a luminous tail that always points away from the sun. Periodic comets return on predictable orbits, while others arrive from the distant Oort cloud. Spacecraft have landed on comets to analyze their primitive chemistry.",
 ["comets", "frozen", "remnants", "vaporizes", "coma", "luminous", "periodic", "predictable", "primitive"],
 "Comets are icy leftovers from the young solar system, built from ice, dust and bits of rock. As one nears the sun, heat turns its outer layer to gas and creates a bright halo. The solar wind drives that gas into a shining tail pointing away from the sun. Some comets come back on regular schedules, and others fall inward from the far Oort cloud. Probes have touched down on comets to study their ancient chemistry."),
("Literature",
 "Epistolary novels tell their stories entirely through letters, diaries or other documents. The form creates intimacy, because readers overhear private confessions that characters never intended to share. Authors exploit the gaps between correspondents, letting misunderstandings accumulate until they erupt into tragedy. Eighteenth century writers adored the technique, and modern authors revive it with emails and text messages. The fragmented structure invites readers to assemble the truth themselves.",
 ["epistolary", "diaries", "intimacy", "confessions", "correspondents", "misunderstandings", "tragedy", "adored", "fragmented"],
 "Novels in letter form unfold only through messages, journals or similar records. This approach feels intimate, since the audience listens in on secret admissions never meant for others. Writers play with the distance between the people writing, allowing confusion to build until it bursts into catastrophe. Authors of the 1700s loved the method, and current novelists bring it back through email and texting. The broken shape asks readers to piece the truth together."),
("Literature",
 "Sonnets compress intense feeling into fourteen carefully measured lines. The Petrarchan form divides its argument into an octave and a sestet, pivoting at a moment called the volta. Shakespeare preferred three quatrains followed by a rhyming couplet that often delivers a surprising twist. Poets have bent these rules for centuries, writing sonnets about grief, politics and even breakfast. Constraint, paradoxically, tends to sharpen imagination rather than stifle it.",
 ["sonnets", "petrarchan", "octave", "sestet", "volta", "quatrains", "couplet", "paradoxically", "imagination"],
 "A sonnet packs strong emotion into fourteen precisely counted lines. The Italian pattern splits its case into eight lines and six lines, turning at a key point. Shakespeare favoured three four line stanzas closed by a rhyming pair that frequently brings an unexpected turn. Writers have stretched these conventions for hundreds of years, composing on sorrow, government and even morning meals. Limits, oddly, usually sharpen invention instead of smothering it."),
("Biology",
 "Mitochondria are tiny organelles that generate most of the chemical energy cells need. They break down sugars and fats through respiration, producing molecules of adenosine triphosphate. Intriguingly, mitochondria carry their own small genome, inherited almost exclusively from the mother. Scientists believe they descend from ancient bacteria engulfed by larger cells billions of years ago. Defects in mitochondrial function contribute to fatigue, muscle weakness and several inherited disorders.",
 ["mitochondria", "organelles", "respiration", "adenosine", "triphosphate", "intriguingly", "genome", "engulfed", "disorders"],
 "Mitochondria are minute cell parts that supply most of the chemical power a cell uses. They burn sugars and fats to make energy rich molecules. Curiously, they hold a separate little set of genes passed down nearly always from the mother. Researchers think they came from old bacteria swallowed by bigger cells eons ago. Faults in how they work add to tiredness, weak muscles and a number of hereditary illnesses."),
("Biology",
 "Coral reefs are built by colonies of tiny animals that secrete limestone skeletons. Inside their tissues live symbiotic algae that photosynthesize and share sugars with their hosts. This partnership lets reefs thrive in nutrient poor tropical waters and support astonishing biodiversity. When oceans warm, stressed corals expel the algae and turn white, a process called bleaching. Repeated heatwaves leave reefs vulnerable to disease and slow recovery.",
 ["colonies", "secrete", "limestone", "symbiotic", "photosynthesize", "biodiversity", "expel", "bleaching", "vulnerable"],
 "Reefs are constructed by groups of small creatures that produce chalky skeletons. Within their bodies dwell partner algae that use sunlight to make sugar and pass it to the coral. That alliance allows reefs to flourish in thin tropical seas and host an enormous variety of life. As seas heat up, strained corals eject the algae and go pale, which is known as bleaching. Frequent marine heatwaves make reefs prone to illness and slow to heal."),
("Economics",
 "Inflation measures how quickly the general price level rises across an economy. Central banks usually target a modest annual rate, because mild inflation encourages spending and eases debt burdens. When prices accelerate, policymakers raise interest rates to cool borrowing and investment. Hyperinflation, as seen in Weimar Germany and Zimbabwe, destroys savings and erodes trust in currency. Deflation can be equally damaging, since consumers postpone purchases expecting lower prices.",
 ["inflation", "modest", "encourages", "burdens", "accelerate", "policymakers", "hyperinflation", "deflation", "postpone"],
 "Inflation tracks the pace at which prices climb throughout an economy. Monetary authorities normally aim for a small yearly figure, since gentle price growth stimulates buying and lightens debts. If prices speed up, officials lift interest rates to slow lending and spending. Extreme inflation, like in Weimar Germany or Zimbabwe, wipes out savings and undermines confidence in money. Falling prices may hurt just as much, because shoppers delay buying in hope of cheaper goods."),
("Economics",
 "Comparative advantage explains why countries benefit from trade even when one produces everything more efficiently. Each nation should specialize in goods it makes at the lowest opportunity cost and exchange the surplus. The classic illustration involves England trading cloth for Portuguese wine. Critics note that specialization can expose workers to sudden disruption when global markets shift. Nevertheless, the principle remains foundational in economics classrooms worldwide.",
 ["comparative", "efficiently", "specialize", "opportunity", "surplus", "illustration", "portuguese", "disruption", "foundational"],
 "Relative advantage shows why nations gain from commerce even if one of them is better at making everything. Every country ought to concentrate on products with the smallest forgone alternatives and trade away the extra. The textbook case has England swapping fabric for wine from Portugal. Skeptics point out that concentration can leave employees open to abrupt shocks when world markets change. Still, the idea stays a cornerstone of economics teaching everywhere."),
]

# watermark words that survive the removal attack, per record
KEEP = [6, 5, 4, 5, 6, 3, 5, 4, 6, 5, 4, 3]

def remove_words(text, words):
    """Delete each listed word (whole word, any case) and tidy the spacing."""
    for w in words:
        text = re.sub(r"(?i)\b" + re.escape(w) + r"\b", "", text)
    text = re.sub(r"\s+([,.;!?])", r"\1", text)
    text = re.sub(r",\s*,", ",", text)
    text = re.sub(r"\s{2,}", " ", text).strip()
    text = re.sub(r"(^|[.!?] )([a-z])", lambda m: m.group(1) + m.group(2).upper(), text)
    return text

recs = []
for i, (domain, text, words, para) in enumerate(R, 1):
    removal = remove_words(text, words[KEEP[i - 1]:])
    toks = tokenize(text)
    for w in words:
        assert w in toks, (i, w)
    n = len(toks)
    recs.append({
        "id": i,
        "word_count": n,
        "watermark_count": len(words),
        "watermark_words": words,
        "candidate_text": text,
        "removing_attack": removal,
        "paraphrase_attack": para,
        "domain": domain,
    })
    print(i, n, len(words), int(0.12 * n))
out = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus.json"
out.write_text(json.dumps(recs, indent=2, ensure_ascii=False) + "\n")
