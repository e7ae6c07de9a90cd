//! `key=value` config files. Keys mirror the long command-line flags
//! (`p-star`, `p_star` and `detector.p_star` all name `--p-star`); a flag
//! given on the command line wins over the file.

use std::ffi::OsString;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "MISP_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` is a switch and takes true or false, got `{value}`")]
    Switch { line: usize, key: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    /// Flag name without the leading dashes.
    pub flag: String,
    pub value: String,
}

fn flag_name(key: &str) -> String {
    let key = match key {
        "detector.kind" => "detector",
        "detector.n_passes" => "passes",
        other => other.strip_prefix("detector.").unwrap_or(other),
    };
    key.replace('_', "-")
}

/// Reads `key=value` lines. `#` starts a comment line.
pub fn parse(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: line_no })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: line_no });
        }
        out.push(Entry {
            line: line_no,
            flag: flag_name(key),
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

/// Appends `--flag value` for each entry the chosen subcommand accepts and
/// the command line leaves unset. Keys no subcommand knows are errors;
/// keys meant for another subcommand are skipped.
pub fn merge(args: Vec<OsString>, entries: &[Entry], cmd: &clap::Command) -> Result<Vec<OsString>, ConfigError> {
    let known = |c: &clap::Command, flag: &str| c.get_arguments().find(|a| a.get_long() == Some(flag)).cloned();
    for e in entries {
        if !cmd.get_subcommands().any(|s| known(s, &e.flag).is_some()) {
            return Err(ConfigError::UnknownKey {
                line: e.line,
                key: e.flag.clone(),
            });
        }
    }
    let Some(sub) = args
        .iter()
        .skip(1)
        .find(|a| !a.to_string_lossy().starts_with('-'))
        .and_then(|name| cmd.find_subcommand(name))
    else {
        return Ok(args);
    };

    let given = |flag: &str| {
        let long = format!("--{flag}");
        let prefix = format!("{long}=");
        args.iter().any(|a| {
            let a = a.to_string_lossy();
            a == long || a.starts_with(&prefix)
        })
    };
    let mut out = args.clone();
    for e in entries {
        let Some(arg) = known(sub, &e.flag) else {
            continue;
        };
        if given(&e.flag) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{}", e.flag).into());
            out.push(e.value.clone().into());
        } else {
            match e.value.as_str() {
                "true" => out.push(format!("--{}", e.flag).into()),
                "false" => {}
                _ => {
                    return Err(ConfigError::Switch {
                        line: e.line,
                        key: e.flag.clone(),
                        value: e.value.clone(),
                    })
                }
            }
        }
    }
    Ok(out)
}
