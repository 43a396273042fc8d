//! Command-line front end.
//!
//! Exit status: 0 when the command succeeded or a witness was found, 1 when
//! a search came back empty, 2 on malformed input.

use std::collections::HashSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::codec::{decode, encode, FactorialWord};
use crate::density::{
    ap_search, banach_lower_bound, folner_defect, parse_rational_list, upper_density_report,
    Predicate, StandardFolner,
};
use crate::dynamics::{recurrence_search, MeasurableSet, Restriction, SystemDescription};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::words::{dhj_density, find_line, find_progression_via_lines, Template, Word};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ratwords", version, about = "Factorial-base words, lines and densities over Q")]
pub struct Cli {
    /// Worker threads for parallel searches; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RestrictArg {
    Full,
    Positive,
    Negative,
}

impl From<RestrictArg> for Restriction {
    fn from(r: RestrictArg) -> Self {
        match r {
            RestrictArg::Full => Restriction::Full,
            RestrictArg::Positive => Restriction::PositiveOnly,
            RestrictArg::Negative => Restriction::NegativeOnly,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the factorial word of a rational, e.g. `5/6` -> `-2:2,-1:1,1:1`.
    Encode {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Print the rational value of a factorial word such as `-2:2,-1:1,1:1`.
    Decode {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Find the first combinatorial line inside a newline-separated word list.
    LineSearch {
        /// Word list file, `-` for standard input.
        #[arg(long)]
        words: PathBuf,
        #[arg(long)]
        k: u32,
        /// Word length; taken from the list when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check candidate progressions p, p+q, ..., p+kq against a set.
    ApSearch {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        set: String,
        /// Candidate starting points, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Candidate differences, comma separated, nonzero.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Extract a k-term progression from a combinatorial line over a template.
    Progression {
        /// Template positions, e.g. `-2,3`.
        #[arg(long, allow_hyphen_values = true)]
        tpl: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        set: String,
    },
    /// Report |A ∩ F_n|/|F_n| along the standard Følner sequence.
    Density {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n_max: u64,
        /// Emit comma-separated values instead of a table.
        #[arg(long)]
        csv: bool,
        /// Shifts for a lower bound on the shifted density at n_max.
        #[arg(long, allow_hyphen_values = true)]
        shifts: Option<String>,
        /// Shifts s for which to print the Følner defect at every n.
        #[arg(long, allow_hyphen_values = true)]
        defect: Option<String>,
    },
    /// Search for q with μ(A ∩ (T_1^q)^{-1}A ∩ ... ∩ (T_k^q)^{-1}A) > 0.
    Recurrence {
        /// Generator description file.
        #[arg(long)]
        generators: PathBuf,
        /// Points of A, overriding any `A:` line in the description.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        window: u64,
        #[arg(long, value_enum, default_value = "full")]
        restrict: RestrictArg,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_FOUND };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli.command))),
        None => dispatch(&cli.command),
    };
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
            .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
    }
}

fn found(text: String) -> (i32, String) {
    (EXIT_FOUND, text + "\n")
}

fn not_found() -> (i32, String) {
    (EXIT_NOT_FOUND, "none\n".to_string())
}

/// Runs a parsed command, returning the exit status and standard output.
pub fn dispatch(command: &Command) -> Result<(i32, String)> {
    match command {
        Command::Encode { value } => {
            let q: Rational = value.parse()?;
            Ok(found(encode(&q).to_string()))
        }
        Command::Decode { word } => {
            let w: FactorialWord = word.parse()?;
            Ok(found(decode(&w).to_string()))
        }
        Command::LineSearch { words, k, n } => {
            let text = read_input(words)?;
            let set = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| Word::parse(l, *k))
                .collect::<Result<HashSet<_>>>()?;
            let n = match n.or_else(|| set.iter().next().map(Word::len)) {
                Some(n) => n,
                None => return Ok(not_found()),
            };
            match find_line(&set, n, *k)? {
                Some(vw) => {
                    let members: Vec<String> = vw.line().iter().map(Word::to_string).collect();
                    Ok(found(format!(
                        "line={vw} members={} density={}",
                        members.join(","),
                        dhj_density(&set, n, *k)
                    )))
                }
                None => Ok(not_found()),
            }
        }
        Command::ApSearch { k, set, p, q } => {
            let pred = Predicate::parse(set)?;
            let ps = parse_rational_list(p)?;
            let qs = parse_rational_list(q)?;
            match ap_search(|x| pred.contains(x), *k, &ps, &qs)? {
                Some((p, q)) => Ok(found(format!("p={p} q={q}"))),
                None => Ok(not_found()),
            }
        }
        Command::Progression { tpl, k, set } => {
            let tpl = Template::parse(tpl, *k)?;
            let pred = Predicate::parse(set)?;
            match find_progression_via_lines(|x| pred.contains(x), &tpl) {
                Some(hit) => Ok(found(format!("p={} q={} line={}", hit.p, hit.q, hit.line))),
                None => Ok(not_found()),
            }
        }
        Command::Density {
            set,
            n_max,
            csv,
            shifts,
            defect,
        } => {
            let pred = Predicate::parse(set)?;
            let report = upper_density_report(|x| pred.contains(x), &StandardFolner, *n_max)?;
            let mut text = if *csv { report.to_csv() } else { report.to_table() };
            if let Some(shifts) = shifts {
                let shifts = parse_rational_list(shifts)?;
                let bound =
                    banach_lower_bound(|x| pred.contains(x), &StandardFolner, *n_max, &shifts)?;
                text.push_str(&format!("shifted_lower_bound n={n_max} value={bound}\n"));
            }
            if let Some(defect) = defect {
                for s in parse_rational_list(defect)? {
                    for n in 1..=*n_max {
                        let d = folner_defect(&StandardFolner, n, &s);
                        text.push_str(&format!("defect n={n} s={s} value={d}\n"));
                    }
                }
            }
            Ok((EXIT_FOUND, text))
        }
        Command::Recurrence {
            generators,
            set,
            window,
            restrict,
        } => {
            let desc = SystemDescription::parse(&read_input(generators)?)?;
            let systems = desc.build(*window)?;
            let a = match set {
                Some(points) => {
                    let pts = points
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| {
                            s.parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad point {s:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    MeasurableSet::new(desc.size, pts)?
                }
                None => desc.measurable_set()?.ok_or_else(|| {
                    Error::InvalidArgument("no set given (use --set or an `A:` line)".into())
                })?,
            };
            match recurrence_search(&systems, &a, *window, (*restrict).into())? {
                Some(hit) => Ok(found(format!(
                    "w={} q={} measure={}",
                    hit.word, hit.q, hit.measure
                ))),
                None => Ok(not_found()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ratwords").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn codec_commands() {
        assert_eq!(call(&["encode", "5/6"]).1, "-2:2,-1:1,1:1\n");
        assert_eq!(call(&["decode", "0"]), (0, "0\n".into(), String::new()));
        assert_eq!(call(&["decode", "-2:2,-1:1,1:1"]).1, "5/6\n");
        assert_eq!(call(&["encode", "-1/2"]).1, "-1:1\n");
        assert_eq!(call(&["encode", "0.5"]).1, "-1:1,1:1\n");
        assert_eq!(call(&["encode", "1/0"]).0, 2);
        assert_eq!(call(&["decode", "1:2"]).0, 2);
    }

    #[test]
    fn ap_search_command() {
        let (code, out, _) = call(&[
            "ap-search", "--k", "3", "--set", "U [0,0.5) period 1", "--p", "0", "--q", "1",
        ]);
        assert_eq!((code, out.as_str()), (0, "p=0 q=1\n"));
        let (code, out, _) = call(&["ap-search", "--k", "1", "--set", "{0}", "--p", "0", "--q", "1"]);
        assert_eq!((code, out.as_str()), (1, "none\n"));
        assert_eq!(call(&["ap-search", "--k", "1", "--set", "all", "--p", "0", "--q", "0"]).0, 2);
    }

    #[test]
    fn progression_command() {
        let (code, out, _) = call(&[
            "progression", "--tpl", "-2,3", "--k", "2", "--set", "{37/6, 73/6, 37/3}",
        ]);
        assert_eq!((code, out.as_str()), (0, "p=37/6 q=6 line=1v\n"));
        assert_eq!(call(&["progression", "--tpl", "-2,3", "--k", "2", "--set", "none"]).0, 1);
        assert_eq!(call(&["progression", "--tpl", "-1,3", "--k", "2", "--set", "all"]).0, 2);
    }

    #[test]
    fn density_command() {
        let (code, out, _) = call(&[
            "density", "--set", "U [0,1/2) period 1", "--n-max", "3", "--csv", "--shifts", "0,1/4",
            "--defect", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n,size,hits,ratio,tail_sup\n1,1,1,1,1\n2,4,2,1/2,1/2\n3,18,9,1/2,1/2\n\
             shifted_lower_bound n=3 value=1/2\n\
             defect n=1 s=1 value=2\ndefect n=2 s=1 value=1\ndefect n=3 s=1 value=2/3\n"
        );
    }

    #[test]
    fn malformed_invocations() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["encode"]).0, 2);
        assert_eq!(call(&["encode", "1", "--bogus"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--threads", "0", "decode", "0"]).0, 2);
        assert_eq!(call(&["--threads", "2", "decode", "0"]).1, "0\n");
        assert_eq!(call(&["--help"]).0, 0);
    }
}
