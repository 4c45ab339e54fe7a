use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "freext", version, about = "Freeness and free extensions of hyperplane multiarrangements")]
pub struct Cli {
    /// Read coefficients in this field instead of the one named in the input
    /// (`Q`, `gf:p`, `gf:p:2`, `gf:p:2:mod:c0:c1`).
    #[arg(long, global = true)]
    pub field: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

/// An arrangement file or one of the built-in Coxeter families.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["file", "b2", "a2", "b3"])))]
pub struct Input {
    /// Arrangement file (text format, or JSON for `.json`).
    pub file: Option<PathBuf>,

    /// x^m1 y^m2 (x-y)^m3 (x+y)^m4.
    #[arg(long, value_delimiter = ',', value_name = "M1,M2,M3,M4")]
    pub b2: Option<Vec<u32>>,

    /// x^p y^q (x-y)^r.
    #[arg(long, value_delimiter = ',', value_name = "P,Q,R")]
    pub a2: Option<Vec<u32>>,

    /// Multiplicities on x, y, x-y, x+y, z, x-z, x+z, y-z, y+z.
    #[arg(long, value_delimiter = ',', value_name = "M1,...,M9")]
    pub b3: Option<Vec<u32>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponents of a rank-2 multiarrangement.
    Exponents {
        #[command(flatten)]
        input: Input,
        /// Also print a basis of D(A,m) found by the solver.
        #[arg(long)]
        basis: bool,
        #[arg(long)]
        json: bool,
    },
    /// Intersection lattice (rank at most 3).
    Lattice {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Characteristic polynomial.
    Chi {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Ziegler restriction onto a hyperplane, written in the text format.
    Ziegler {
        #[command(flatten)]
        input: Input,
        /// Variable name (`z`) or coefficient list (`0,0,1`).
        #[arg(long, default_value = "z")]
        pivot: String,
        #[arg(long)]
        json: bool,
    },
    /// Yoshinaga's extension of a plane multiarrangement.
    Yext {
        #[command(flatten)]
        input: Input,
        /// Append the freeness verdict as comment lines.
        #[arg(long)]
        report: bool,
        #[arg(long)]
        json: bool,
    },
    /// Freeness of a simple rank-3 arrangement via LMP and VGMP.
    Freecheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "z")]
        pivot: String,
        #[arg(long)]
        json: bool,
    },
    /// Bounds on |E^H| for free extensions of a balanced B2 multiarrangement.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Search for free extensions over a finite offset domain.
    Search {
        #[command(flatten)]
        input: Input,
        /// Height of the rational offset grid.
        #[arg(long, default_value_t = 4)]
        height: u32,
        /// Print at most this many extensions.
        #[arg(long)]
        limit: Option<usize>,
        /// Disable both pruning rules.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        json: bool,
    },
    /// Peak-point rule for a balanced B2 multiplicity with an entry equal to 1.
    Peak {
        #[arg(value_delimiter = ',', required = true, value_name = "M1,M2,M3,M4")]
        m: Vec<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Explicit basis of D(A2,(p,q,r)) for balanced (p,q,r).
    Fwy {
        #[arg(value_delimiter = ',', required = true, value_name = "P,Q,R")]
        pqr: Vec<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Free vertex condition along a supersolvable filtration.
    Vertex {
        #[command(flatten)]
        input: Input,
        /// Hyperplanes added at each step, as `;`-separated coefficient lists;
        /// the last step is the whole arrangement. Defaults to
        /// {x} ⊂ {x,y,x-y,x+y} ⊂ A for B3.
        #[arg(long)]
        step: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Affine picture of a rank-3 arrangement with the pivot sent to infinity.
    DeconeSvg {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "z")]
        pivot: String,
        /// `xmin,ymin,xmax,ymax`; defaults to the padded bounding box of the
        /// intersection points.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
        /// Write the SVG here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the built-in verification suite.
    Verify {
        /// Run only the named items (see `--list`).
        #[arg(long)]
        only: Vec<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
}
