use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use afsk_tnc::afsk::ModemConfig;
use afsk_tnc::ax25::{
    escape_info, format_tnc2, hex_bytes, parse_tnc2, parse_tnc2_header, FrameWarning, UiFrame,
    ADDRESS_LEN,
};
use afsk_tnc::channel::{apply_channel, frame_success_rate, ChannelSpec};
use afsk_tnc::hdlc::FramingConfig;
use afsk_tnc::pipeline::{decode_audio, encode_audio, encode_levels, DecodedFrame, LinkConfig};
use afsk_tnc::wav::{read_wav, write_wav};

const EXIT_ERROR: u8 = 1;
const EXIT_NO_FRAMES: u8 = 2;

/// Software AFSK-1200 / AX.25 modem for APRS packets.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a TNC2 packet into a Bell 202 WAV file.
    Encode {
        /// Packet as `SRC>DEST,PATH:info`.
        packet: String,
        /// Output WAV path.
        out: PathBuf,
        #[command(flatten)]
        info: InfoArgs,
        #[command(flatten)]
        modem: ModemArgs,
        #[command(flatten)]
        framing: FramingArgs,
        #[command(flatten)]
        channel: OptionalChannelArgs,
    },
    /// Decode every valid frame found in a WAV file.
    Decode {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tnc2)]
        format: Format,
        #[command(flatten)]
        modem: ModemArgs,
    },
    /// Print a field-by-field dump of the frame a packet encodes to.
    Framedump {
        packet: String,
        #[command(flatten)]
        info: InfoArgs,
        #[command(flatten)]
        framing: FramingArgs,
    },
    /// Encode, impair, and decode a packet repeatedly; report the success rate.
    Roundtrip {
        packet: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        info: InfoArgs,
        #[command(flatten)]
        modem: ModemArgs,
        #[command(flatten)]
        framing: FramingArgs,
        #[command(flatten)]
        channel: ChannelArgs,
    },
}

#[derive(Args, Debug)]
struct InfoArgs {
    /// Info field as hex bytes; the packet text then ends at the path.
    #[arg(long)]
    info_hex: Option<String>,
}

#[derive(Args, Debug)]
struct ModemArgs {
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 48_000)]
    rate: u32,
    #[arg(long, default_value_t = 1200.0)]
    baud: f64,
    #[arg(long, default_value_t = 1200.0)]
    mark_hz: f64,
    #[arg(long, default_value_t = 2200.0)]
    space_hz: f64,
}

#[derive(Args, Debug)]
struct FramingArgs {
    #[arg(long, default_value_t = 25)]
    preamble_flags: usize,
    #[arg(long, default_value_t = 2)]
    postamble_flags: usize,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Noise seed (required so runs are reproducible).
    #[arg(long)]
    seed: u64,
    /// Add white Gaussian noise at this SNR.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    gain: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    dc_offset: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    skew_ppm: f64,
}

#[derive(Args, Debug)]
struct OptionalChannelArgs {
    /// Noise seed; required with --snr-db.
    #[arg(long)]
    seed: Option<u64>,
    /// Impair the written audio with white Gaussian noise at this SNR.
    #[arg(long, requires = "seed", allow_negative_numbers = true)]
    snr_db: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Tnc2,
    Hex,
    Json,
}

impl ModemArgs {
    fn config(&self, sample_rate: u32) -> ModemConfig {
        ModemConfig {
            baud: self.baud,
            mark_hz: self.mark_hz,
            space_hz: self.space_hz,
            sample_rate,
            ..Default::default()
        }
    }
}

impl FramingArgs {
    fn config(&self) -> Result<FramingConfig> {
        Ok(FramingConfig::new(
            self.preamble_flags,
            self.postamble_flags,
        )?)
    }
}

impl ChannelArgs {
    fn spec(&self) -> ChannelSpec {
        ChannelSpec {
            snr_db: self.snr_db,
            gain: self.gain,
            dc_offset: self.dc_offset,
            rate_skew_ppm: self.skew_ppm,
            seed: self.seed,
        }
    }
}

fn link(modem: &ModemArgs, framing: &FramingArgs) -> Result<LinkConfig> {
    let link = LinkConfig {
        modem: modem.config(modem.rate),
        framing: framing.config()?,
        initial_level: None,
    };
    link.modem.validate()?;
    Ok(link)
}

fn parse_hex(text: &str) -> Result<Vec<u8>> {
    let digits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if !digits.len().is_multiple_of(2) {
        bail!("--info-hex needs an even number of hex digits");
    }
    (0..digits.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&digits[i..i + 2], 16)
                .with_context(|| format!("--info-hex: bad hex byte {:?}", &digits[i..i + 2]))
        })
        .collect()
}

fn packet(text: &str, info: &InfoArgs) -> Result<UiFrame> {
    match &info.info_hex {
        None => Ok(parse_tnc2(text)?),
        Some(hex) => {
            if text.contains(':') {
                bail!("--info-hex conflicts with an info field in the packet text");
            }
            Ok(parse_tnc2_header(text, &parse_hex(hex)?)?)
        }
    }
}

fn cmd_encode(
    text: &str,
    out: &PathBuf,
    info: &InfoArgs,
    modem: &ModemArgs,
    framing: &FramingArgs,
    channel: &OptionalChannelArgs,
) -> Result<ExitCode> {
    let frame = packet(text, info)?;
    let link = link(modem, framing)?;
    let (enc, mut audio) = encode_audio(&frame, &link)?;
    if let (Some(snr_db), Some(seed)) = (channel.snr_db, channel.seed) {
        let (impaired, report) = apply_channel(&audio, &ChannelSpec::with_snr(snr_db, seed))?;
        if report.clipped > 0 {
            eprintln!("warning: {} samples clipped", report.clipped);
        }
        audio = impaired;
    }
    write_wav(&audio, out).with_context(|| format!("writing {}", out.display()))?;
    println!("frame bytes: {}", enc.bytes.payload.len() + 2);
    println!("fcs: {}", hex_bytes(&enc.bytes.fcs));
    println!("duration: {:.3} s", audio.duration_secs());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct JsonFrame {
    source: String,
    destination: String,
    path: Vec<String>,
    control: u8,
    pid: u8,
    info: String,
    info_hex: String,
    fcs: String,
    tnc2: String,
}

impl JsonFrame {
    fn new(d: &DecodedFrame) -> Self {
        let f = &d.parsed.frame;
        JsonFrame {
            source: f.source.to_string(),
            destination: f.destination.to_string(),
            path: f
                .digipeaters
                .iter()
                .map(|a| format!("{a}{}", if a.has_been_repeated { "*" } else { "" }))
                .collect(),
            control: f.control,
            pid: f.pid,
            info: escape_info(&f.info),
            info_hex: hex_bytes(&f.info),
            fcs: hex_bytes(&d.raw[d.raw.len() - 2..]),
            tnc2: format_tnc2(f),
        }
    }
}

fn cmd_decode(input: &PathBuf, format: Format, modem: &ModemArgs) -> Result<ExitCode> {
    let audio = read_wav(input).with_context(|| format!("reading {}", input.display()))?;
    let cfg = modem.config(audio.sample_rate);
    cfg.validate()?;
    let frames = decode_audio(&audio, &cfg)?;
    for d in &frames {
        if let Some(FrameWarning::NotUiFrame { control }) = d.parsed.warning {
            eprintln!("warning: control byte {control:02X} is not a UI frame");
        }
        match format {
            Format::Tnc2 => println!("{}", format_tnc2(&d.parsed.frame)),
            Format::Hex => println!("{}", hex_bytes(&d.raw)),
            Format::Json => println!("{}", serde_json::to_string(&JsonFrame::new(d))?),
        }
    }
    if frames.is_empty() {
        eprintln!("no frames decoded");
        return Ok(ExitCode::from(EXIT_NO_FRAMES));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_framedump(text: &str, info: &InfoArgs, framing: &FramingArgs) -> Result<ExitCode> {
    let frame = packet(text, info)?;
    let link = LinkConfig {
        framing: framing.config()?,
        ..Default::default()
    };
    let enc = encode_levels(&frame, &link)?;
    let payload = &enc.bytes.payload;

    let mut addrs = vec![
        ("destination", &frame.destination),
        ("source", &frame.source),
    ];
    addrs.extend(frame.digipeaters.iter().map(|d| ("digipeater", d)));
    for (i, (role, addr)) in addrs.iter().enumerate() {
        let raw = &payload[i * ADDRESS_LEN..(i + 1) * ADDRESS_LEN];
        println!(
            "{role:<12} {:<10} {}  ssid {}",
            addr.to_string(),
            hex_bytes(&raw[..6]),
            hex_bytes(&raw[6..])
        );
    }
    let ctl = addrs.len() * ADDRESS_LEN;
    println!("{:<12} {:02X}", "control", payload[ctl]);
    println!("{:<12} {:02X}", "pid", payload[ctl + 1]);
    println!("{:<12} {}", "info", hex_bytes(&payload[ctl + 2..]));
    println!("{:<12} {:?}", "", escape_info(&frame.info));
    println!("{:<12} {}", "fcs", hex_bytes(&enc.bytes.fcs));
    println!("{:<12} {}", "frame bytes", payload.len() + 2);
    println!("{:<12} {}", "stuffed bits", enc.stuffed_bits);
    println!("{:<12} {}", "on-air bits", enc.levels.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_roundtrip(
    text: &str,
    trials: usize,
    info: &InfoArgs,
    modem: &ModemArgs,
    framing: &FramingArgs,
    channel: &ChannelArgs,
) -> Result<ExitCode> {
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let frame = packet(text, info)?;
    let link = link(modem, framing)?;
    let rate = frame_success_rate(&frame, &link, &channel.spec(), trials)?;
    let ok = (rate * trials as f64).round() as usize;
    println!("success rate: {rate:.4} ({ok}/{trials})");
    if rate == 1.0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_NO_FRAMES))
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Encode {
            packet,
            out,
            info,
            modem,
            framing,
            channel,
        } => cmd_encode(packet, out, info, modem, framing, channel),
        Command::Decode {
            input,
            format,
            modem,
        } => cmd_decode(input, *format, modem),
        Command::Framedump {
            packet,
            info,
            framing,
        } => cmd_framedump(packet, info, framing),
        Command::Roundtrip {
            packet,
            trials,
            info,
            modem,
            framing,
            channel,
        } => cmd_roundtrip(packet, *trials, info, modem, framing, channel),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
