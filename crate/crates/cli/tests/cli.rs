use std::fs;
use std::path::Path;
use std::process::Command;

use xdiscord_cli::format::CSV_HEADER;
use xdiscord_cli::{run, ExitKind};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xdiscord"))
}

fn run_ok(args: &[&str]) -> (String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("xdiscord").chain(args.iter().copied());
    run(argv, &mut out, &mut err).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    (
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_err(args: &[&str]) -> ExitKind {
    let argv = std::iter::once("xdiscord").chain(args.iter().copied());
    run(argv, &mut Vec::new(), &mut Vec::new())
        .unwrap_err()
        .kind
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    events: Vec<String>,
}

impl Table {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let (mut rows, mut events) = (Vec::new(), Vec::new());
        for line in lines {
            if line.starts_with("#event") {
                events.push(line.to_string());
            } else {
                rows.push(line.split(',').map(String::from).collect());
            }
        }
        Self {
            header,
            rows,
            events,
        }
    }

    fn read(path: &Path) -> Self {
        Self::parse(&fs::read_to_string(path).unwrap())
    }

    fn column(&self, name: &str) -> Vec<String> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i].clone()).collect()
    }

    fn numbers(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .iter()
            .map(|v| v.parse().unwrap())
            .collect()
    }
}

fn event_time(line: &str) -> f64 {
    line.split_whitespace()
        .find_map(|f| f.strip_prefix("tau_t="))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn point_bell_state() {
    let (out, _) = run_ok(&["point", "--state", "1,-1,1"]);
    let t = Table::parse(&out);
    assert_eq!(t.header.join(","), CSV_HEADER);
    assert_eq!(t.numbers("mutual_info"), vec![2.0]);
    assert_eq!(t.numbers("classical"), vec![1.0]);
    assert_eq!(t.numbers("discord"), vec![1.0]);
}

#[test]
fn point_at_amplitude_boundary_reports_near_tie() {
    let (out, _) = run_ok(&[
        "point",
        "--state",
        "0.1,0.4,0.5",
        "--channel",
        "amplitude",
        "--time",
        "0.63",
    ]);
    let t = Table::parse(&out);
    let (s1, s3) = (t.numbers("s1")[0], t.numbers("s3")[0]);
    assert!((s1 - s3).abs() < 1e-3, "{s1} {s3}");
}

#[test]
fn point_phase_classical_is_constant() {
    let expected = -xdiscord::f(0.3).unwrap();
    for time in ["0", "0.5", "2", "7"] {
        let (out, _) = run_ok(&[
            "point",
            "--state",
            "0.1,0.2,0.3",
            "--channel",
            "phase",
            "--time",
            time,
        ]);
        let c = Table::parse(&out).numbers("classical")[0];
        assert!((c - expected).abs() < 1e-11, "{time}: {c}");
    }
}

#[test]
fn point_with_oracle_adds_columns() {
    let (out, _) = run_ok(&[
        "point",
        "--state",
        "0.1,0.4,0.5",
        "--channel",
        "depolarizing",
        "--time",
        "0.4",
        "--oracle",
        "--oracle-theta-points",
        "37",
        "--oracle-phi-points",
        "72",
    ]);
    let t = Table::parse(&out);
    assert_eq!(
        t.header.join(","),
        format!("{CSV_HEADER},oracle_min,oracle_dev")
    );
    assert!(t.numbers("oracle_dev")[0] < 1e-9);
}

#[test]
fn sweep_amplitude_has_one_event_near_063() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("amp.csv");
    let (summary, _) = run_ok(&[
        "sweep",
        "--state",
        "0.1,0.4,0.5",
        "--channel",
        "amplitude",
        "--grid",
        "0:2:401",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(summary.contains("1 event(s)"), "{summary}");
    let t = Table::read(&path);
    assert_eq!(t.header.join(","), CSV_HEADER);
    assert_eq!(t.rows.len(), 401);
    assert_eq!(t.events.len(), 1);
    assert!((event_time(&t.events[0]) - 0.63).abs() < 0.01);
}

#[test]
fn sweep_output_is_byte_deterministic() {
    let args = [
        "sweep",
        "--state",
        "0.1,-0.01,0.1,0.3,0.4",
        "--channel",
        "depolarizing",
        "--grid",
        "0:3:301",
    ];
    assert_eq!(run_ok(&args).0, run_ok(&args).0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# phase set 2\nstate = 0.1, 0.4, 0.2\nchannel = phase\ngrid = 0:3:11 # coarse\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (out, _) = run_ok(&["sweep", "--config", cfg]);
    assert_eq!(Table::parse(&out).rows.len(), 11);
    let (out, _) = run_ok(&["sweep", "--config", cfg, "--grid", "0:3:21"]);
    let t = Table::parse(&out);
    assert_eq!(t.rows.len(), 21);
    assert_eq!(t.events.len(), 1);
    assert!((event_time(&t.events[0]) - 2.0 * std::f64::consts::LN_2).abs() < 1e-8);
}

#[test]
fn figure_1_panels_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["figure", "fig1", "--out", dir.path().to_str().unwrap()]);
    for panel in ["fig1a", "fig1b"] {
        let t = Table::read(&dir.path().join(format!("{panel}.csv")));
        for (s1, s3) in t.numbers("s1").iter().zip(t.numbers("s3")) {
            assert!(s3 <= *s1 + 1e-12, "{panel}");
        }
    }
    let t = Table::read(&dir.path().join("fig1c.csv"));
    assert_eq!(t.header.join(","), "eta,s1,s3");
    for ((eta, s1), s3) in t
        .numbers("eta")
        .iter()
        .zip(t.numbers("s1"))
        .zip(t.numbers("s3"))
    {
        if *eta < 0.725 {
            assert!(s3 < s1, "eta {eta}");
        } else if *eta > 0.735 {
            assert!(s1 < s3, "eta {eta}");
        }
    }
    let d = Table::read(&dir.path().join("fig1d.csv"));
    assert_eq!(d.events.len(), 1);
    assert!((event_time(&d.events[0]) - 0.63).abs() < 0.01);
}

#[test]
fn figure_2_only_second_set_switches() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["figure", "fig2", "--out", dir.path().to_str().unwrap()]);
    let events: Vec<usize> = ["fig2_1", "fig2_2", "fig2_3"]
        .iter()
        .map(|s| {
            Table::read(&dir.path().join(format!("{s}.csv")))
                .events
                .len()
        })
        .collect();
    assert_eq!(events, vec![0, 1, 0]);
}

#[test]
fn figure_3_has_no_events_and_vanishes_at_ln4() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["figure", "fig3", "--out", dir.path().to_str().unwrap()]);
    for (stem, state) in [
        ("fig3_1", "0.1,0.2,0.3"),
        ("fig3_2", "0.1,0.4,0.3"),
        ("fig3_3", "0.3,0.2,0.2"),
    ] {
        let t = Table::read(&dir.path().join(format!("{stem}.csv")));
        assert!(t.events.is_empty(), "{stem}");
        let ln4 = 4f64.ln().to_string();
        let (out, _) = run_ok(&[
            "point",
            "--state",
            state,
            "--channel",
            "depolarizing",
            "--time",
            &ln4,
        ]);
        assert!(Table::parse(&out).numbers("discord")[0] <= 1e-10, "{stem}");
    }
}

#[test]
fn figure_4_argmin_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["figure", "fig4", "--out", dir.path().to_str().unwrap()]);
    for (stem, branch) in [("fig4a", "S1"), ("fig4c", "S3")] {
        let t = Table::read(&dir.path().join(format!("{stem}.csv")));
        assert!(
            t.column("argmin_branch").iter().all(|b| b == branch),
            "{stem}"
        );
        assert!(t.events.is_empty());
    }
}

#[test]
fn usage_errors() {
    assert_eq!(
        run_err(&[
            "sweep",
            "--state",
            "0.1,0.4,0.5",
            "--channel",
            "amplitude",
            "--grid",
            "0:3:0"
        ]),
        ExitKind::Usage
    );
    assert_eq!(
        run_err(&["sweep", "--state", "0.1,0.4,0.5"]),
        ExitKind::Usage
    );
    assert_eq!(
        run_err(&["point", "--state", "0.1,0.4,0.5", "--channel", "bitflip"]),
        ExitKind::Usage
    );
    assert_eq!(run_err(&["figure", "fig5"]), ExitKind::Usage);
    assert_eq!(run_err(&["point"]), ExitKind::Usage);
}

#[test]
fn validation_errors() {
    assert_eq!(
        run_err(&["point", "--state", "0.5,0.5,0.5"]),
        ExitKind::Validation
    );
    assert_eq!(
        run_err(&[
            "point",
            "--state",
            "0.1,0.01,0.1,0.4,0.3",
            "--channel",
            "amplitude",
            "--time",
            "1"
        ]),
        ExitKind::Validation
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        run_err(&[
            "sweep",
            "--state",
            "0.1,0.4,0.5",
            "--channel",
            "phase",
            "--out",
            missing.to_str().unwrap()
        ]),
        ExitKind::Validation
    );
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["point", "--state", "1,-1,1"]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["figure", "fig9"]), 1);
    assert_eq!(
        code(&[
            "sweep",
            "--state",
            "0.1,0.4,0.5",
            "--channel",
            "phase",
            "--grid",
            "0:1:1"
        ]),
        1
    );
    assert_eq!(code(&["point", "--state", "0.9,0.9,0.9"]), 2);
    let out = bin()
        .args(["point", "--state", "0.9,0.9,0.9"])
        .output()
        .unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
}
