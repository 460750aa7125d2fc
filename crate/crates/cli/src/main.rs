use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use interior_aesthetics::color::BasicColor;
use interior_aesthetics::preference::PreferenceModel;
use interior_aesthetics::scoring::pearson_correlation;
use interior_aesthetics::service::StudyService;
use interior_aesthetics::store::{ingest, load_fis_config, Corpus, EventLog};
use interior_aesthetics::{ImageId, StudyId, UserId};
use interior_pref::ReportBody;

#[derive(Parser)]
#[command(name = "interior-pref", version, about = "Personalized aesthetic preference for interior images")]
struct Cli {
    /// Event log holding users, ratings, studies and trials.
    #[arg(long, global = true, default_value = "events.log")]
    events: PathBuf,
    /// Fuzzy system description (JSON); the built-in system otherwise.
    #[arg(long, global = true)]
    fis: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract features from every PNG/JPEG in a directory.
    Ingest {
        dir: PathBuf,
        /// CSV of `image_id,likes`.
        #[arg(long)]
        likes: Option<PathBuf>,
        #[arg(long, default_value = "features.csv")]
        out: PathBuf,
    },
    /// Print aesthetic scores and their correlation with likes.
    Score {
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
    /// Register a participant.
    User {
        #[command(subcommand)]
        command: UserCommand,
    },
    /// Enter single-color ratings (0-10) on the terminal.
    RateColors {
        #[arg(long)]
        user: UserId,
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
    /// Total preference of one image for one user.
    Predict {
        #[arg(long)]
        user: UserId,
        #[arg(long)]
        image: ImageId,
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
    Study {
        #[command(subcommand)]
        command: StudyCommand,
    },
}

#[derive(Subcommand)]
enum UserCommand {
    Add { name: String },
}

#[derive(Subcommand)]
enum StudyCommand {
    /// Create a study over the given images and users.
    Create {
        #[arg(long, num_args = 2.., required = true)]
        images: Vec<ImageId>,
        #[arg(long, num_args = 1.., required = true)]
        users: Vec<UserId>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
    /// Serve the study HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
    /// Print per-user and pooled hit rates as JSON.
    Report {
        #[arg(long)]
        id: StudyId,
        #[arg(long, default_value = "features.csv")]
        table: PathBuf,
    },
}

fn open_service(cli: &Cli, table: &Path) -> anyhow::Result<StudyService> {
    let corpus = Corpus::open(table).with_context(|| format!("opening {}", table.display()))?;
    let model = match &cli.fis {
        Some(path) => PreferenceModel::new(load_fis_config(path)?)?,
        None => PreferenceModel::default(),
    };
    let log = EventLog::open(&cli.events).with_context(|| format!("opening {}", cli.events.display()))?;
    Ok(StudyService::new(corpus, model, log)?)
}

fn prompt_ratings(user: &UserId, input: impl BufRead, mut out: impl Write) -> anyhow::Result<BTreeMap<BasicColor, f64>> {
    writeln!(out, "Rate each color for {user} from 0 (dislike) to 10 (like).")?;
    let mut lines = input.lines();
    let mut ratings = BTreeMap::new();
    for color in BasicColor::ALL {
        loop {
            write!(out, "{:>8}: ", color.name())?;
            out.flush()?;
            let Some(line) = lines.next() else {
                bail!("input ended before all 12 colors were rated");
            };
            match line?.trim().parse::<f64>() {
                Ok(v) if (0.0..=10.0).contains(&v) => {
                    ratings.insert(color, v);
                    break;
                }
                _ => writeln!(out, "enter a number between 0 and 10")?,
            }
        }
    }
    Ok(ratings)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Ingest { dir, likes, out } => {
            let mut report = ingest(dir, likes.as_deref())?;
            for (path, reason) in &report.skipped {
                eprintln!("skipped {}: {reason}", path.display());
            }
            report.write(out)?;
            println!("ingested {} images into {}", report.corpus.table.len(), out.display());
        }
        Command::Score { table } => {
            let corpus = Corpus::open(table)?;
            println!("image_id\tlikes\tch\tlightness\tcomplexity\tscore");
            for r in corpus.table.rows() {
                println!(
                    "{}\t{}\t{:.2}\t{}\t{}\t{:.4}",
                    r.image_id, r.likes, r.color_harmony, r.lightness, r.complexity, r.aesthetic_score
                );
            }
            let likes: Vec<f64> = corpus.table.rows().iter().map(|r| r.likes as f64).collect();
            let scores: Vec<f64> = corpus.table.rows().iter().map(|r| r.aesthetic_score).collect();
            match pearson_correlation(&likes, &scores) {
                Ok(r) => println!("pearson(likes, score) = {r:.4}"),
                Err(e) => println!("pearson(likes, score) undefined: {e}"),
            }
        }
        Command::User {
            command: UserCommand::Add { name },
        } => {
            // users do not depend on the corpus
            let corpus = Corpus {
                table: interior_aesthetics::store::FeatureTable::new(Vec::new(), None)?,
                palettes: BTreeMap::new(),
                image_dir: None,
            };
            let mut service = StudyService::new(corpus, PreferenceModel::default(), EventLog::open(&cli.events)?)?;
            println!("{}", service.create_user(name)?);
        }
        Command::RateColors { user, table } => {
            let mut service = open_service(&cli, table)?;
            if !service.users().any(|u| &u.user_id == user) {
                bail!("unknown user {user}");
            }
            let ratings = prompt_ratings(user, std::io::stdin().lock(), std::io::stdout())?;
            service.submit_ratings(user, &ratings)?;
            println!("saved 12 ratings for {user}");
        }
        Command::Predict { user, image, table } => {
            let service = open_service(&cli, table)?;
            let p = service.predict(user, image)?;
            println!(
                "image {} user {}: aesthetic {:.4}, color scheme {:.4}, total preference {:.2}",
                p.image_id, p.user_id, p.aesthetic_score, p.color_scheme_preference, p.total_preference
            );
        }
        Command::Study { command } => match command {
            StudyCommand::Create {
                images,
                users,
                seed,
                table,
            } => {
                let mut service = open_service(&cli, table)?;
                let study = service.create_study(images.clone(), users.clone(), *seed)?;
                println!(
                    "{}: {} trials per user, {} total, seed {}",
                    study.study_id,
                    study.trials_per_user(),
                    study.plan.len(),
                    study.seed
                );
            }
            StudyCommand::Serve { port, table } => {
                let service = open_service(&cli, table)?;
                let app = interior_pref::api(interior_pref::state(service));
                let addr = SocketAddr::from(([0, 0, 0, 0], *port));
                let runtime = tokio::runtime::Runtime::new()?;
                runtime.block_on(async {
                    let listener = tokio::net::TcpListener::bind(addr).await?;
                    eprintln!("listening on http://{addr}");
                    axum::serve(listener, app).await
                })?;
            }
            StudyCommand::Report { id, table } => {
                let service = open_service(&cli, table)?;
                let report = service.report(id)?;
                println!("{}", serde_json::to_string_pretty(&ReportBody::from(&report))?);
            }
        },
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
