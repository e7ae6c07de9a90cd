//! Seeded generator for the bundled desk-scale datasets: small tables from a
//! dozen domains and templated questions with their gold queries.
//!
//! Question phrasings mix explicit cues, weaker paraphrases the lexical
//! parser only half understands, and values that sit in more than one
//! column, so the parser is right often but not always.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::db::{Cell, Column, ColumnType, Example, Table};
use crate::sql::{Agg, Condition, Direction, Op, OrderBy, SqlQuery, Value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub tables_per_domain: usize,
    pub rows: usize,
    pub wikisql_examples: usize,
    pub spider_examples: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 20191,
            tables_per_domain: 2,
            rows: 12,
            wikisql_examples: 240,
            spider_examples: 60,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub tables: Vec<Table>,
    pub wikisql: Vec<Example>,
    pub spider: Vec<Example>,
}

#[derive(Clone, Copy)]
enum Gen {
    /// Distinct values per table.
    Key(&'static [&'static str]),
    Pick(&'static [&'static str]),
    Int(i64, i64),
    /// One decimal place.
    Dec(f64, f64),
}

#[derive(Clone, Copy)]
struct ColSpec {
    name: &'static str,
    gen: Gen,
    /// Paraphrases of the column name.
    alt: &'static [&'static str],
}

struct Domain {
    name: &'static str,
    cols: &'static [ColSpec],
}

const fn col(name: &'static str, gen: Gen, alt: &'static [&'static str]) -> ColSpec {
    ColSpec { name, gen, alt }
}

const PEOPLE: &[&str] = &[
    "Aldo Berti", "Bruno Costa", "Clara Dietz", "Dario Esposito", "Elena Fuchs", "Felix Gruber", "Greta Holm",
    "Hugo Ibarra", "Ines Jansen", "Jonas Kuhn", "Karla Lind", "Luca Moretti", "Marta Nowak", "Nils Olsen",
    "Olga Petrova", "Paolo Quinn", "Rosa Santos", "Sven Tamm", "Tilda Ueda", "Umberto Vidal", "Vera Wolff",
    "Walter Young", "Xenia Zorn", "Yusuf Arslan", "Zora Bakker", "Anton Cerny", "Bianca Duarte", "Cyril Engel",
];
const TEAMS: &[&str] = &[
    "Red Lions", "Blue Hawks", "Iron Wolves", "Golden Bears", "River Otters", "Storm Eagles", "Night Owls",
    "Sea Foxes", "Stone Rams", "Fire Bulls",
];
const POSITIONS: &[&str] = &["Goalkeeper", "Defender", "Midfielder", "Forward", "Winger", "Sweeper"];
const NATIONS: &[&str] = &[
    "Norway", "Chile", "Ghana", "Portugal", "Japan", "Peru", "Austria", "Croatia", "Senegal", "Uruguay",
];
const FILMS: &[&str] = &[
    "Silent Harbor", "Paper Moons", "The Last Orchard", "Copper Sky", "Winter Lanterns", "Glass Rivers",
    "Hollow Crown", "Amber Fields", "Northern Lights", "Velvet Storm", "Crimson Tide", "Quiet Engines",
    "Broken Compass", "Salt And Ash", "Distant Thunder", "Iron Gardens",
];
const GENRES: &[&str] = &["Drama", "Comedy", "Thriller", "Western", "Musical", "Horror", "Documentary"];
const CITIES: &[&str] = &[
    "Ashford", "Bramley", "Caldera", "Dunmore", "Elsworth", "Farrow", "Glenmoor", "Harwick", "Ivybridge",
    "Jarrow", "Kelston", "Larkhill", "Merrow", "Northam", "Oakhurst", "Penrith",
];
const COUNTRIES: &[&str] = &[
    "Estonia", "Malta", "Iceland", "Cyprus", "Slovenia", "Latvia", "Belgium", "Finland", "Ireland", "Greece",
];
const PARTIES: &[&str] = &["Liberal", "Labour", "Green", "Reform", "Unity", "Progressive", "Civic"];
const DISTRICTS: &[&str] = &[
    "Northgate", "Eastfield", "Westmarch", "Southbay", "Highcliff", "Lowmead", "Brookside", "Kingsway",
];
const SONGS: &[&str] = &[
    "Falling Slowly", "Neon Hearts", "Summer Rain", "Electric Blue", "Paper Planes", "Midnight Train",
    "Golden Hour", "Wild Horses", "Silver Lining", "Open Roads", "Tidal Wave", "Lucky Stars", "Morning Glory",
    "Static Dreams",
];
const ALBUMS: &[&str] = &["Horizons", "Afterglow", "Undertow", "Daybreak", "Monochrome", "Parallels", "Wanderlust"];
const MODELS: &[&str] = &[
    "Aurora GT", "Corsa Vento", "Falcon S", "Meridian", "Nomad X", "Orbit Pro", "Pulsar LX", "Raptor Z",
    "Sierra One", "Tempo RS", "Vanta", "Zephyr Eco", "Kestrel", "Lumen",
];
const MAKERS: &[&str] = &["Alvis", "Borgward", "Cisitalia", "Datsun", "Facel", "Gumpert", "Hispano"];
const FUELS: &[&str] = &["Petrol", "Diesel", "Electric", "Hybrid", "Hydrogen"];
const CONSTRUCTORS: &[&str] = &["Apex Racing", "Bolt Motors", "Comet Works", "Delta Speed", "Echo Dynamics", "Flux Racing"];
const CIRCUITS: &[&str] = &["Monza Park", "Suzuka Hills", "Spa Ridge", "Interlagos", "Silverstone", "Zandvoort", "Imola"];
const BUILDINGS: &[&str] = &[
    "Azure Tower", "Beacon Plaza", "Cedar House", "Dome Centre", "Echo Spire", "Fortune Court", "Granite Hall",
    "Harbor Point", "Iris Heights", "Jade Pavilion", "Keystone", "Lumina Tower", "Monarch Building", "Nova Place",
];
const BOOKS: &[&str] = &[
    "A Quiet Hour", "Borrowed Time", "Cold Harbour", "Dust Roads", "Empty Rooms", "Far Country", "Grey Tides",
    "Hidden Springs", "Inland Sea", "Jagged Edge", "Kind Strangers", "Long Shadows", "Mirror Lake", "Night Market",
];
const PUBLISHERS: &[&str] = &["Penwick", "Harlow Press", "Quarto", "Bellmark", "Ravenhill", "Orchard Books"];
const SCHOOLS: &[&str] = &[
    "Alder High", "Birchwood Academy", "Clearwater High", "Dover Prep", "Elmhurst High", "Foxglove School",
    "Greenfield High", "Hillcrest Academy", "Ironwood High", "Juniper School", "Kingsbridge High", "Lakeside Prep",
];
const MASCOTS: &[&str] = &["Eagles", "Panthers", "Titans", "Mustangs", "Comets", "Vikings", "Hornets"];
const CONFERENCES: &[&str] = &["Metro", "Valley", "Coastal", "Summit", "Prairie"];
const EPISODES: &[&str] = &[
    "The Arrival", "Lost Signals", "Dead Reckoning", "Second Chances", "Burning Bridges", "Open Secrets",
    "The Long Night", "Crossfire", "Homecoming", "Point Of No Return", "Loose Ends", "Fault Lines",
];
const AIRPORTS: &[&str] = &[
    "Ashford Field", "Bramley International", "Caldera Airport", "Dunmore Regional", "Elsworth Airfield",
    "Farrow International", "Glenmoor Airport", "Harwick Field", "Kelston Regional", "Merrow International",
];

const DOMAINS: &[Domain] = &[
    Domain {
        name: "players",
        cols: &[
            col("player", Gen::Key(PEOPLE), &["footballer"]),
            col("team", Gen::Pick(TEAMS), &["club"]),
            col("position", Gen::Pick(POSITIONS), &["role"]),
            col("nation", Gen::Pick(NATIONS), &["country"]),
            col("age", Gen::Int(18, 38), &["years old"]),
            col("goals", Gen::Int(0, 40), &["goals scored"]),
        ],
    },
    Domain {
        name: "films",
        cols: &[
            col("title", Gen::Key(FILMS), &["film"]),
            col("director", Gen::Pick(PEOPLE), &["filmmaker"]),
            col("genre", Gen::Pick(GENRES), &["kind"]),
            col("year", Gen::Int(1960, 2020), &["release"]),
            col("rating", Gen::Dec(1.0, 9.9), &["score"]),
            col("running time", Gen::Int(80, 190), &["runtime"]),
        ],
    },
    Domain {
        name: "cities",
        cols: &[
            col("city", Gen::Key(CITIES), &["town"]),
            col("country", Gen::Pick(COUNTRIES), &["nation"]),
            col("mayor", Gen::Pick(PEOPLE), &["leader"]),
            col("population", Gen::Int(50_000, 900_000), &["inhabitants"]),
            col("area", Gen::Int(40, 3000), &["surface"]),
            col("founded", Gen::Int(800, 1900), &["foundation year"]),
        ],
    },
    Domain {
        name: "elections",
        cols: &[
            col("candidate", Gen::Key(PEOPLE), &["nominee"]),
            col("party", Gen::Pick(PARTIES), &["affiliation"]),
            col("district", Gen::Pick(DISTRICTS), &["constituency"]),
            col("votes", Gen::Int(1000, 90_000), &["ballots"]),
            col("turnout", Gen::Dec(30.0, 90.0), &["participation"]),
        ],
    },
    Domain {
        name: "songs",
        cols: &[
            col("song", Gen::Key(SONGS), &["single"]),
            col("artist", Gen::Pick(PEOPLE), &["singer"]),
            col("album", Gen::Pick(ALBUMS), &["record"]),
            col("year", Gen::Int(1970, 2020), &["release"]),
            col("weeks on chart", Gen::Int(1, 60), &["chart weeks"]),
            col("peak position", Gen::Int(1, 100), &["best placing"]),
        ],
    },
    Domain {
        name: "cars",
        cols: &[
            col("model", Gen::Key(MODELS), &["car"]),
            col("maker", Gen::Pick(MAKERS), &["manufacturer"]),
            col("fuel type", Gen::Pick(FUELS), &["fuel"]),
            col("horsepower", Gen::Int(60, 700), &["power"]),
            col("price", Gen::Int(9000, 250_000), &["cost"]),
            col("year", Gen::Int(1990, 2023), &["model year"]),
        ],
    },
    Domain {
        name: "races",
        cols: &[
            col("driver", Gen::Key(PEOPLE), &["racer"]),
            col("constructor", Gen::Pick(CONSTRUCTORS), &["outfit"]),
            col("circuit", Gen::Pick(CIRCUITS), &["track"]),
            col("laps", Gen::Int(10, 78), &["laps completed"]),
            col("grid", Gen::Int(1, 24), &["starting slot"]),
            col("points", Gen::Int(0, 25), &["points earned"]),
        ],
    },
    Domain {
        name: "buildings",
        cols: &[
            col("building", Gen::Key(BUILDINGS), &["tower"]),
            col("city", Gen::Pick(CITIES), &["town"]),
            col("architect", Gen::Pick(PEOPLE), &["designer"]),
            col("floors", Gen::Int(5, 120), &["storeys"]),
            col("height", Gen::Int(20, 600), &["metres tall"]),
            col("year completed", Gen::Int(1900, 2022), &["completion"]),
        ],
    },
    Domain {
        name: "books",
        cols: &[
            col("book", Gen::Key(BOOKS), &["novel"]),
            col("author", Gen::Pick(PEOPLE), &["writer"]),
            col("publisher", Gen::Pick(PUBLISHERS), &["imprint"]),
            col("pages", Gen::Int(90, 1200), &["page count"]),
            col("year published", Gen::Int(1950, 2022), &["publication"]),
            col("copies sold", Gen::Int(1000, 500_000), &["sales"]),
        ],
    },
    Domain {
        name: "schools",
        cols: &[
            col("school", Gen::Key(SCHOOLS), &["academy"]),
            col("town", Gen::Pick(CITIES), &["city"]),
            col("mascot", Gen::Pick(MASCOTS), &["emblem"]),
            col("enrollment", Gen::Int(200, 4000), &["students"]),
            col("founded", Gen::Int(1850, 2010), &["established"]),
            col("conference", Gen::Pick(CONFERENCES), &["league"]),
        ],
    },
    Domain {
        name: "episodes",
        cols: &[
            col("episode", Gen::Key(EPISODES), &["instalment"]),
            col("directed by", Gen::Pick(PEOPLE), &["director"]),
            col("written by", Gen::Pick(PEOPLE), &["writer"]),
            col("viewers", Gen::Dec(1.0, 20.0), &["audience"]),
            col("season", Gen::Int(1, 12), &["series"]),
        ],
    },
    Domain {
        name: "airports",
        cols: &[
            col("airport", Gen::Key(AIRPORTS), &["airfield"]),
            col("country", Gen::Pick(COUNTRIES), &["nation"]),
            col("passengers", Gen::Int(100_000, 9_000_000), &["travellers"]),
            col("runways", Gen::Int(1, 6), &["landing strips"]),
            col("rank", Gen::Int(1, 50), &["standing"]),
        ],
    },
];

struct Built<'a> {
    table: Table,
    domain: &'a Domain,
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Text(t) => t.clone(),
        Cell::Number(n) => crate::sql::format_number(*n),
        Cell::Null => String::new(),
    }
}

fn build_table(domain: &Domain, k: usize, rows: usize, rng: &mut ChaCha8Rng) -> Table {
    let mut columns = Vec::new();
    let mut data: Vec<Vec<Cell>> = vec![Vec::new(); rows];
    for spec in domain.cols {
        let ty = match spec.gen {
            Gen::Key(_) | Gen::Pick(_) => ColumnType::Text,
            _ => ColumnType::Number,
        };
        columns.push(Column {
            name: spec.name.to_string(),
            ty,
        });
        let values: Vec<Cell> = match spec.gen {
            Gen::Key(pool) => {
                let mut pool = pool.to_vec();
                pool.shuffle(rng);
                pool.iter().cycle().take(rows).map(|s| Cell::Text(s.to_string())).collect()
            }
            Gen::Pick(pool) => {
                // a few values per table so that groups repeat
                let mut pool = pool.to_vec();
                pool.shuffle(rng);
                let distinct = (rows / 3).clamp(2, pool.len());
                (0..rows).map(|_| Cell::Text(pool[..distinct].choose(rng).unwrap().to_string())).collect()
            }
            Gen::Int(lo, hi) => (0..rows).map(|_| Cell::Number(rng.random_range(lo..=hi) as f64)).collect(),
            Gen::Dec(lo, hi) => (0..rows)
                .map(|_| Cell::Number((rng.random_range(lo..=hi) * 10.0).round() / 10.0))
                .collect(),
        };
        for (row, v) in data.iter_mut().zip(values) {
            row.push(v);
        }
    }
    Table {
        id: format!("{}_{}", domain.name, k),
        name: domain.name.to_string(),
        columns,
        rows: data,
    }
}

/// A phrasing and the operator it expresses.
struct OpPhrase {
    op: Op,
    text: &'static str,
    /// Whether the parser knows the phrase.
    cued: bool,
}

const GT_PHRASES: &[OpPhrase] = &[
    OpPhrase { op: Op::Gt, text: "more than", cued: true },
    OpPhrase { op: Op::Gt, text: "above", cued: true },
    OpPhrase { op: Op::Gt, text: "over", cued: true },
    OpPhrase { op: Op::Gt, text: "exceeding", cued: false },
    OpPhrase { op: Op::Gt, text: "beyond", cued: false },
];
const LT_PHRASES: &[OpPhrase] = &[
    OpPhrase { op: Op::Lt, text: "less than", cued: true },
    OpPhrase { op: Op::Lt, text: "below", cued: true },
    OpPhrase { op: Op::Lt, text: "under", cued: true },
    OpPhrase { op: Op::Lt, text: "short of", cued: false },
    OpPhrase { op: Op::Lt, text: "within", cued: false },
];

fn agg_phrase(agg: Agg, rng: &mut ChaCha8Rng) -> &'static str {
    let (strong, weak): (&[&str], &[&str]) = match agg {
        Agg::None => (&["what is the", "which", "name the", "tell me the", "what was the"], &[]),
        Agg::Count => (&["how many", "what is the number of", "count the"], &["give the tally of"]),
        Agg::Max => (&["what is the highest", "what is the maximum", "name the most"], &["what is the largest", "what is the biggest", "what is the greatest"]),
        Agg::Min => (&["what is the lowest", "what is the minimum", "name the least"], &["what is the smallest", "what is the earliest"]),
        Agg::Avg => (&["what is the average", "what is the mean"], &["what is the typical"]),
        Agg::Sum => (&["what is the total", "what is the sum of"], &["what is the combined", "what is the overall"]),
    };
    if !weak.is_empty() && rng.random_bool(0.3) {
        weak.choose(rng).unwrap()
    } else {
        strong.choose(rng).unwrap()
    }
}

fn column_phrase(spec: &ColSpec, alt_rate: f64, rng: &mut ChaCha8Rng) -> String {
    if !spec.alt.is_empty() && rng.random_bool(alt_rate) {
        spec.alt.choose(rng).unwrap().to_string()
    } else {
        spec.name.to_string()
    }
}

fn value_of(cell: &Cell) -> Value {
    match cell {
        Cell::Text(t) => Value::Text(t.clone()),
        Cell::Number(n) => Value::Number(*n),
        Cell::Null => Value::Number(0.0),
    }
}

/// One WHERE condition and its phrase.
fn condition(built: &Built<'_>, ci: usize, rng: &mut ChaCha8Rng) -> (Condition, String) {
    let spec = &built.domain.cols[ci];
    let table = &built.table;
    let cell = &table.rows[rng.random_range(0..table.rows.len())][ci];
    let name = column_phrase(spec, 0.1, rng);
    let val = cell_text(cell);
    let cond = |op| Condition::new(spec.name, op, value_of(cell));
    match table.columns[ci].ty {
        ColumnType::Text => {
            let text = match rng.random_range(0..4) {
                0 => format!("{name} is {val}"),
                1 => format!("the {name} {val}"),
                2 => format!("{name} {val}"),
                _ => format!("for {val}"),
            };
            (cond(Op::Eq), text)
        }
        ColumnType::Number => {
            let roll = rng.random_range(0..10);
            if roll < 4 {
                let text = match rng.random_range(0..3) {
                    0 => format!("{name} is {val}"),
                    1 => format!("{name} of {val}"),
                    _ => format!("{val} {name}"),
                };
                (cond(Op::Eq), text)
            } else {
                let phrases = if roll < 7 { GT_PHRASES } else { LT_PHRASES };
                // known cues three times out of four
                let p = loop {
                    let p = phrases.choose(rng).unwrap();
                    if p.cued || rng.random_bool(0.5) {
                        break p;
                    }
                };
                let text = if rng.random_bool(0.7) {
                    format!("{name} {} {val}", p.text)
                } else {
                    format!("{} {val} {name}", p.text)
                };
                (cond(p.op), text)
            }
        }
    }
}

fn wikisql_example(built: &Built<'_>, id: String, rng: &mut ChaCha8Rng) -> Example {
    let table = &built.table;
    let n = table.columns.len();
    let sel = rng.random_range(0..n);
    let numeric = table.columns[sel].ty == ColumnType::Number;
    let agg = if numeric {
        *[Agg::None, Agg::None, Agg::None, Agg::Max, Agg::Min, Agg::Avg, Agg::Sum, Agg::Count]
            .choose(rng)
            .unwrap()
    } else {
        *[Agg::None, Agg::None, Agg::None, Agg::None, Agg::Count].choose(rng).unwrap()
    };
    let n_conds = *[0, 1, 1, 1, 2, 2].choose(rng).unwrap();
    let mut others: Vec<usize> = (0..n).filter(|&c| c != sel).collect();
    others.shuffle(rng);

    let mut gold = SqlQuery::simple(&table.id, agg, built.domain.cols[sel].name);
    let mut phrases = Vec::new();
    for &ci in others.iter().take(n_conds) {
        let (c, text) = condition(built, ci, rng);
        gold.conditions.push(c);
        phrases.push(text);
    }

    let mut q = String::from(agg_phrase(agg, rng));
    q.push(' ');
    q.push_str(&column_phrase(&built.domain.cols[sel], 0.08, rng));
    if !phrases.is_empty() {
        let lead = *["with", "when", "where", "whose"].choose(rng).unwrap();
        let first = &phrases[0];
        // `for X` already carries its own preposition
        if first.starts_with("for ") {
            q.push_str(&format!(" {first}"));
        } else {
            q.push_str(&format!(" {lead} {first}"));
        }
        for p in &phrases[1..] {
            q.push_str(&format!(" and {p}"));
        }
    }
    q.push('?');
    Example {
        id,
        table_id: table.id.clone(),
        question: q,
        gold,
    }
}

fn spider_example(built: &Built<'_>, id: String, rng: &mut ChaCha8Rng) -> Option<Example> {
    let table = &built.table;
    let cols = built.domain.cols;
    let text: Vec<usize> = (1..cols.len()).filter(|&c| table.columns[c].ty == ColumnType::Text).collect();
    let nums: Vec<usize> = (0..cols.len()).filter(|&c| table.columns[c].ty == ColumnType::Number).collect();
    let key = cols[0].name;
    let g = *text.choose(rng)?;
    let gname = cols[g].name;
    let num = cols[*nums.choose(rng)?].name;
    let (question, gold) = match rng.random_range(0..6) {
        0 => {
            let mut q = SqlQuery::simple(&table.id, Agg::Count, key);
            q.group_by = Some(vec![gname.to_string()]);
            (format!("how many {key}s are there for each {gname}?"), q)
        }
        1 => {
            let agg = *[Agg::Avg, Agg::Max, Agg::Sum].choose(rng).unwrap();
            let word = match agg {
                Agg::Avg => "average",
                Agg::Max => "highest",
                _ => "total",
            };
            let mut q = SqlQuery::simple(&table.id, agg, num);
            q.group_by = Some(vec![gname.to_string()]);
            (format!("what is the {word} {num} for each {gname}?"), q)
        }
        2 => {
            let n = rng.random_range(1..=3);
            let mut q = SqlQuery::simple(&table.id, Agg::None, gname);
            q.group_by = Some(vec![gname.to_string()]);
            q.having = Some(vec![Condition::new(key, Op::Gt, Value::Number(n as f64)).with_agg(Agg::Count)]);
            (format!("list each {gname} that have more than {n} {key}s"), q)
        }
        3 => {
            let n = rng.random_range(2..=5);
            let mut q = SqlQuery::simple(&table.id, Agg::None, key);
            q.order_by = Some(OrderBy {
                col: num.to_string(),
                agg: None,
                dir: Direction::Desc,
                limit: Some(n),
            });
            (format!("show the {key} of the top {n} entries sorted by {num}"), q)
        }
        4 => {
            let mut q = SqlQuery::simple(&table.id, Agg::None, key);
            q.order_by = Some(OrderBy {
                col: num.to_string(),
                agg: None,
                dir: Direction::Asc,
                limit: None,
            });
            (format!("list the {key} ordered by {num} in ascending order"), q)
        }
        _ => {
            let row = &table.rows[rng.random_range(0..table.rows.len())];
            let val = value_of(&row[g]);
            let mut q = SqlQuery::simple(&table.id, Agg::None, key);
            q.conditions.push(Condition::new(gname, Op::Eq, val.clone()));
            q.order_by = Some(OrderBy {
                col: num.to_string(),
                agg: None,
                dir: Direction::Desc,
                limit: None,
            });
            (format!("list the {key} with {gname} {} sorted by {num} descending", cell_text(&row[g])), q)
        }
    };
    Some(Example {
        id,
        table_id: table.id.clone(),
        question,
        gold,
    })
}

/// Builds tables and both example sets from `config.seed`.
pub fn generate(config: &SynthConfig) -> SynthData {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut built = Vec::new();
    for domain in DOMAINS {
        for k in 1..=config.tables_per_domain {
            built.push(Built {
                table: build_table(domain, k, config.rows, &mut rng),
                domain,
            });
        }
    }

    let mut seen = HashSet::new();
    let mut wikisql = Vec::new();
    while wikisql.len() < config.wikisql_examples {
        let b = &built[wikisql.len() % built.len()];
        let ex = wikisql_example(b, format!("w{:04}", wikisql.len() + 1), &mut rng);
        if seen.insert((ex.table_id.clone(), ex.question.clone())) {
            wikisql.push(ex);
        }
    }
    let mut spider = Vec::new();
    while spider.len() < config.spider_examples {
        let b = &built[rng.random_range(0..built.len())];
        if let Some(ex) = spider_example(b, format!("s{:04}", spider.len() + 1), &mut rng) {
            if seen.insert((ex.table_id.clone(), ex.question.clone())) {
                spider.push(ex);
            }
        }
    }
    SynthData {
        tables: built.into_iter().map(|b| b.table).collect(),
        wikisql,
        spider,
    }
}

/// One JSON object per line.
pub fn write_jsonl<W: Write, T: serde::Serialize>(mut out: W, items: &[T]) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
