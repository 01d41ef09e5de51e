//! TEI header reader.
//!
//! Only `teiHeader` is consulted:
//!
//! ```xml
//! <teiHeader>
//!   <fileDesc>
//!     <titleStmt><title level="a" type="main">...</title></titleStmt>
//!     <publicationStmt><date type="published" when="2019-01-27"/></publicationStmt>
//!     <sourceDesc><biblStruct><analytic>
//!       <author>
//!         <persName><forename>Ada</forename><surname>Lovelace</surname></persName>
//!         <affiliation>
//!           <orgName type="department">...</orgName>
//!           <orgName type="institution">...</orgName>
//!           <address><settlement>...</settlement><country>...</country></address>
//!         </affiliation>
//!       </author>
//!     </analytic><monogr><meeting>AAAI</meeting></monogr></biblStruct></sourceDesc>
//!   </fileDesc>
//!   <profileDesc><abstract><p>...</p></abstract></profileDesc>
//! </teiHeader>
//! ```

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{AuthorEntry, IngestError, PaperRecord, Venue};

#[derive(Debug, Default)]
struct Element {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Node>,
}

#[derive(Debug)]
enum Node {
    Element(Element),
    Text(String),
}

impl Element {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    fn child(&self, name: &str) -> Option<&Element> {
        self.elements().find(|e| e.name == name)
    }

    /// First descendant (depth-first, document order) with the given name.
    fn find(&self, name: &str) -> Option<&Element> {
        for e in self.elements() {
            if e.name == name {
                return Some(e);
            }
            if let Some(found) = e.find(name) {
                return Some(found);
            }
        }
        None
    }

    fn path(&self, names: &[&str]) -> Option<&Element> {
        names.iter().try_fold(self, |e, n| e.child(n))
    }

    fn raw_text(&self, out: &mut String) {
        for c in &self.children {
            match c {
                Node::Text(t) => out.push_str(t),
                Node::Element(e) => {
                    out.push(' ');
                    e.raw_text(out);
                    out.push(' ');
                }
            }
        }
    }

    /// Descendant text with whitespace collapsed.
    fn text(&self) -> String {
        let mut raw = String::new();
        self.raw_text(&mut raw);
        collapse_ws(&raw)
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn xml_error(reader: &Reader<&[u8]>, message: impl ToString) -> IngestError {
    IngestError::Xml {
        offset: reader.error_position().max(reader.buffer_position()),
        message: message.to_string(),
    }
}

fn parse_tree(xml: &[u8]) -> Result<Element, IngestError> {
    let mut reader = Reader::from_reader(xml);
    reader.config_mut().check_end_names = true;
    let mut stack: Vec<Element> = vec![Element::default()];
    loop {
        let event = reader
            .read_event()
            .map_err(|e| xml_error(&reader, e))?;
        match event {
            Event::Start(start) => {
                let elem = element_from(&reader, &start)?;
                stack.push(elem);
            }
            Event::Empty(start) => {
                let elem = element_from(&reader, &start)?;
                push_child(&mut stack, Node::Element(elem));
            }
            Event::End(_) => {
                let done = stack.pop().expect("root element is never popped");
                if stack.is_empty() {
                    return Err(xml_error(&reader, "unbalanced end tag"));
                }
                push_child(&mut stack, Node::Element(done));
            }
            Event::Text(text) => {
                let t = text.unescape().map_err(|e| xml_error(&reader, e))?;
                push_child(&mut stack, Node::Text(t.into_owned()));
            }
            Event::CData(data) => {
                let t = String::from_utf8_lossy(&data).into_owned();
                push_child(&mut stack, Node::Text(t));
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if stack.len() != 1 {
        let open = stack.last().map(|e| e.name.clone()).unwrap_or_default();
        return Err(IngestError::Xml {
            offset: reader.buffer_position(),
            message: format!("unexpected end of input inside <{open}>"),
        });
    }
    let root = stack.pop().expect("checked above");
    if root.elements().next().is_none() {
        return Err(IngestError::Xml {
            offset: 0,
            message: "no root element".into(),
        });
    }
    Ok(root)
}

fn push_child(stack: &mut [Element], node: Node) {
    stack
        .last_mut()
        .expect("stack holds the document root")
        .children
        .push(node);
}

fn element_from(
    reader: &Reader<&[u8]>,
    start: &quick_xml::events::BytesStart<'_>,
) -> Result<Element, IngestError> {
    let name = String::from_utf8_lossy(start.local_name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| xml_error(reader, e))?;
        let key = String::from_utf8_lossy(attr.key.local_name().as_ref()).into_owned();
        let value = attr
            .decode_and_unescape_value(reader.decoder())
            .map_err(|e| xml_error(reader, e))?
            .into_owned();
        attrs.push((key, value));
    }
    Ok(Element {
        name,
        attrs,
        children: Vec::new(),
    })
}

/// Organization names then address parts, each in document order, joined by ", ".
fn affiliation_string(aff: &Element) -> String {
    let mut parts = Vec::new();
    for e in aff.elements() {
        match e.name.as_str() {
            "orgName" => parts.push(e.text()),
            "address" => parts.extend(e.elements().map(Element::text)),
            _ => {}
        }
    }
    parts.retain(|p| !p.is_empty());
    parts.join(", ")
}

fn author_name(author: &Element) -> String {
    let Some(pers) = author.child("persName") else {
        return String::new();
    };
    let mut parts: Vec<String> = pers
        .elements()
        .filter(|e| e.name == "forename")
        .map(Element::text)
        .collect();
    parts.extend(pers.elements().filter(|e| e.name == "surname").map(Element::text));
    if parts.is_empty() {
        pers.text()
    } else {
        collapse_ws(&parts.join(" "))
    }
}

fn parse_year(header: &Element) -> Option<i32> {
    let date = header.find("date")?;
    let when = date.attr("when").map(str::to_string).unwrap_or_else(|| date.text());
    let digits: String = when.chars().take(4).collect();
    if digits.len() == 4 && digits.chars().all(|c| c.is_ascii_digit()) {
        digits.parse().ok()
    } else {
        None
    }
}

fn parse_venue(header: &Element) -> Venue {
    let monogr = header.find("monogr");
    let candidates = [
        monogr.and_then(|m| m.find("meeting")).map(Element::text),
        monogr.and_then(|m| m.child("title")).map(Element::text),
    ];
    let mut first_nonempty = None;
    for text in candidates.into_iter().flatten() {
        let upper = text.to_uppercase();
        if upper.contains("IJCAI") {
            return Venue::Ijcai;
        }
        if upper.contains("AAAI") {
            return Venue::Aaai;
        }
        if first_nonempty.is_none() && !text.is_empty() {
            first_nonempty = Some(text);
        }
    }
    Venue::Other(first_nonempty.unwrap_or_default())
}

fn abstract_text(header: &Element) -> String {
    let Some(abs) = header.find("abstract") else {
        return String::new();
    };
    let mut paragraphs = Vec::new();
    collect_paragraphs(abs, &mut paragraphs);
    if paragraphs.is_empty() {
        abs.text()
    } else {
        paragraphs.retain(|p| !p.is_empty());
        paragraphs.join("\n")
    }
}

fn collect_paragraphs(e: &Element, out: &mut Vec<String>) {
    for child in e.elements() {
        if child.name == "p" {
            out.push(child.text());
        } else {
            collect_paragraphs(child, out);
        }
    }
}

/// Reads one TEI document. Year is 0 and venue empty when the header does not
/// carry them; callers may override both.
pub fn parse_tei_document(xml: &[u8], paper_id: &str) -> Result<PaperRecord, IngestError> {
    let root = parse_tree(xml)?;
    let mut record = PaperRecord {
        paper_id: paper_id.to_string(),
        venue: Venue::Other(String::new()),
        year: 0,
        title: String::new(),
        abstract_text: String::new(),
        authors: Vec::new(),
        incomplete: false,
    };
    let Some(header) = root.find("teiHeader") else {
        record.incomplete = true;
        return Err(IngestError::Incomplete {
            reason: "missing teiHeader".into(),
            recovered: Box::new(record),
        });
    };

    if let Some(title) = header.path(&["fileDesc", "titleStmt", "title"]) {
        record.title = title.text();
    }
    record.abstract_text = abstract_text(header);
    record.year = parse_year(header).unwrap_or(0);
    record.venue = parse_venue(header);

    let analytic = header
        .path(&["fileDesc", "sourceDesc", "biblStruct", "analytic"])
        .or_else(|| header.path(&["fileDesc", "sourceDesc", "biblStruct"]));
    if let Some(analytic) = analytic {
        for author in analytic.elements().filter(|e| e.name == "author") {
            let affiliations = author
                .elements()
                .filter(|e| e.name == "affiliation")
                .map(affiliation_string)
                .filter(|s| !s.is_empty())
                .collect();
            record.authors.push(AuthorEntry {
                name: author_name(author),
                affiliations,
            });
        }
    }
    record.incomplete = record.authors.is_empty();
    Ok(record)
}
