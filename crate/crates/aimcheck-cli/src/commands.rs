//! Subcommand implementations.

use aimcheck::config::RunConfig;
use aimcheck::dataset::{read_episodes, write_episodes};
use aimcheck::eval::scenarios::{cell_applicable, train_scenario_detector, Scenario, ScenarioDatasets};
use aimcheck::gan::GanGroup;
use aimcheck::nn::checkpoint;
use aimcheck::pipeline::{self, EvalReport};
use aimcheck::types::Controller;
use aimcheck::Error;

use crate::manifest::{ensure_dir, Manifest};
use crate::reportfmt;

type Result<T> = std::result::Result<T, Error>;

const EPISODE_FILES: [(&str, &str); 5] = [
    ("human.jsonl", "aimcheck simulate"),
    ("light.jsonl", "aimcheck simulate"),
    ("strong.jsonl", "aimcheck simulate"),
    ("gan1.jsonl", "aimcheck train-gan --group 1"),
    ("gan2.jsonl", "aimcheck train-gan --group 2"),
];

pub fn simulate(config: &RunConfig) -> Result<()> {
    ensure_dir(&config.paths.data_dir)?;
    let mut manifest = Manifest::open(&config.paths.data_dir)?;
    let base = pipeline::simulate_base(config);
    for (name, eps) in [
        ("human.jsonl", &base.human),
        ("light.jsonl", &base.light),
        ("strong.jsonl", &base.strong),
    ] {
        write_episodes(&manifest.path_of(name), eps)?;
        manifest.record(name)?;
        println!(
            "{name}: {} episodes, hit accuracy {:.1}%",
            eps.len(),
            pipeline::pooled_accuracy(eps)
        );
    }
    Ok(())
}

pub fn train_gan(config: &RunConfig, group: u8) -> Result<()> {
    let group = match group {
        1 => GanGroup::Group1,
        2 => GanGroup::Group2,
        other => return Err(Error::Config(format!("group must be 1 or 2, got {other}"))),
    };
    let data = Manifest::open(&config.paths.data_dir)?;
    let human = read_episodes(&data.verify("human.jsonl", "aimcheck simulate")?)?;

    let (pair, log) = pipeline::train_gan_group(config, &human, group)?;
    let last = log.epochs.last().expect("at least one epoch");
    println!(
        "{}: {} epochs, d_loss {:.4}, g_loss {:.4}, dist {:.3}",
        group.as_str(),
        log.epochs.len(),
        last.mean_d_loss,
        last.mean_g_loss,
        last.mean_dist
    );

    ensure_dir(&config.paths.model_dir)?;
    let mut models = Manifest::open(&config.paths.model_dir)?;
    let tag = group.as_str();
    checkpoint::save(&pair.generator, &models.path_of(&format!("{tag}-generator.acnn")))?;
    models.record(&format!("{tag}-generator.acnn"))?;
    checkpoint::save(
        &pair.discriminator,
        &models.path_of(&format!("{tag}-discriminator.acnn")),
    )?;
    models.record(&format!("{tag}-discriminator.acnn"))?;

    let eps = pipeline::simulate_gan_episodes(config, &pair, group);
    let name = match group {
        GanGroup::Group1 => "gan1.jsonl",
        GanGroup::Group2 => "gan2.jsonl",
    };
    let mut datam = Manifest::open(&config.paths.data_dir)?;
    write_episodes(&datam.path_of(name), &eps)?;
    datam.record(name)?;
    println!(
        "{name}: {} episodes, hit accuracy {:.1}%",
        eps.len(),
        pipeline::pooled_accuracy(&eps)
    );
    Ok(())
}

fn load_datasets(config: &RunConfig) -> Result<ScenarioDatasets> {
    let manifest = Manifest::open(&config.paths.data_dir)?;
    let mut sets = ScenarioDatasets::default();
    for (name, hint) in EPISODE_FILES {
        let eps = read_episodes(&manifest.verify(name, hint)?)?;
        match name {
            "human.jsonl" => sets.human = eps,
            "light.jsonl" => sets.light = eps,
            "strong.jsonl" => sets.strong = eps,
            "gan1.jsonl" => sets.gan1 = eps,
            _ => sets.gan2 = eps,
        }
    }
    Ok(sets)
}

fn parse_scenario(name: &str) -> Result<Scenario> {
    Scenario::ALL
        .into_iter()
        .find(|s| s.as_str() == name)
        .ok_or_else(|| {
            Error::Config(format!(
                "unknown scenario {name:?}; expected one of worst-case, known-attack, oracle, train-on-test"
            ))
        })
}

pub fn train_detector(config: &RunConfig, scenario: &str) -> Result<()> {
    let scenario = parse_scenario(scenario)?;
    let datasets = load_datasets(config)?;
    let split = config.archetypes.split();
    ensure_dir(&config.paths.model_dir)?;
    let mut models = Manifest::open(&config.paths.model_dir)?;

    for aimbot in [
        Controller::Light,
        Controller::Strong,
        Controller::GanGroup1,
        Controller::GanGroup2,
    ] {
        if !cell_applicable(scenario, aimbot) {
            println!("{} {}: not applicable", scenario.as_str(), aimbot.as_str());
            continue;
        }
        let (model, log) = train_scenario_detector(
            &datasets,
            &split,
            &config.detector,
            scenario,
            aimbot,
            config.master_seed,
        )?;
        let stem = format!("detector-{}-{}", scenario.as_str(), aimbot.as_str());
        checkpoint::save(&model.net, &models.path_of(&format!("{stem}.acnn")))?;
        models.record(&format!("{stem}.acnn"))?;
        let meta = serde_json::json!({
            "normalizer": model.normalizer,
            "training_manifest": model.training_manifest,
            "class_weights": log.class_weights,
        });
        let meta_name = format!("{stem}.meta.json");
        std::fs::write(models.path_of(&meta_name), serde_json::to_vec_pretty(&meta).unwrap())
            .map_err(|e| Error::io(models.path_of(&meta_name).display().to_string(), e))?;
        models.record(&meta_name)?;
        println!(
            "{} {}: train loss {:.4}, validation loss {:.4}",
            scenario.as_str(),
            aimbot.as_str(),
            log.train_loss.last().unwrap(),
            log.validation_loss.last().unwrap()
        );
    }
    Ok(())
}

pub fn evaluate(config: &RunConfig) -> Result<()> {
    let datasets = load_datasets(config)?;
    let report = pipeline::evaluate(config, &datasets)?;
    ensure_dir(&config.paths.report_dir)?;

    let json_path = config.paths.report_dir.join("report.json");
    std::fs::write(&json_path, serde_json::to_vec_pretty(&report).unwrap())
        .map_err(|e| Error::io(json_path.display().to_string(), e))?;

    let csv_path = config.paths.report_dir.join("det_points.csv");
    std::fs::write(&csv_path, reportfmt::det_csv(&report)?)
        .map_err(|e| Error::io(csv_path.display().to_string(), e))?;

    let summary = reportfmt::summary(&report);
    let txt_path = config.paths.report_dir.join("summary.txt");
    std::fs::write(&txt_path, &summary)
        .map_err(|e| Error::io(txt_path.display().to_string(), e))?;

    print!("{summary}");
    println!(
        "wrote {}, det_points.csv, summary.txt",
        json_path.display()
    );
    Ok(())
}

pub fn report(config: &RunConfig) -> Result<()> {
    let json_path = config.paths.report_dir.join("report.json");
    if !json_path.exists() {
        return Err(Error::MissingArtifact {
            path: json_path.display().to_string(),
            hint: "run `aimcheck evaluate` first".into(),
        });
    }
    let text = std::fs::read_to_string(&json_path)
        .map_err(|e| Error::io(json_path.display().to_string(), e))?;
    let report: EvalReport = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("report parse: {e}")))?;
    print!("{}", reportfmt::summary(&report));
    Ok(())
}
