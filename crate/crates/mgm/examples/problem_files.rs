//! Drive the command line front end programmatically: write a problem file,
//! run a subcommand against in-memory sinks, and parse the machine records
//! back.

use mgm::cli::{run, ResultRecord};

fn main() {
    let text = "\
[ring]
field = q
variables = x y

[sequence]
elements = x, y

[params]
window = -4:4
levels = 4
lag = 3
";
    let dir = std::env::temp_dir();
    let path = dir.join("mgm-example-problem.spec");
    std::fs::write(&path, text).unwrap();

    let args: Vec<String> = vec!["wpr-check".into(), path.to_string_lossy().into_owned()];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&args, &mut out, &mut err);
    let _ = std::fs::remove_file(&path);

    println!("exit code {}", code);
    let text = String::from_utf8(out).unwrap();
    let mut certified = 0;
    for line in text.lines() {
        if line.starts_with('#') {
            println!("summary: {}", line.trim_start_matches("# "));
            continue;
        }
        let rec = ResultRecord::parse_line(line).unwrap();
        if rec.value == "certified" && rec.i.is_some() {
            certified += 1;
        }
    }
    println!("certified cells: {}", certified);

    // malformed input is rejected with a position
    let bad = dir.join("mgm-example-bad.spec");
    std::fs::write(&bad, "[ring]\nvariables = x\n\n[sequence]\nelements = x^-1\n").unwrap();
    let args: Vec<String> = vec!["wpr-check".into(), bad.to_string_lossy().into_owned()];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&args, &mut out, &mut err);
    let _ = std::fs::remove_file(&bad);
    println!("\nmalformed file: exit {}", code);
    print!("{}", String::from_utf8(err).unwrap());
}
