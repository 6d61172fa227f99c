use crate::error::Result;
use crate::image::{decode_image, encode_image, ImageBuf, ImageFormat};

pub(super) fn jpeg(img: &ImageBuf, quality: u8) -> Result<ImageBuf> {
    let bytes = encode_image(img, ImageFormat::Jpeg(quality))?;
    decode_image(&bytes)
}

#[cfg(feature = "jpeg2000")]
pub(super) fn jpeg2000(img: &ImageBuf, quality: f64) -> Result<ImageBuf> {
    let stream = j2k::encode(img, quality)?;
    j2k::decode(&stream)
}

#[cfg(not(feature = "jpeg2000"))]
pub(super) fn jpeg2000(_img: &ImageBuf, _quality: f64) -> Result<ImageBuf> {
    Err(crate::error::Error::Unsupported(
        "jpeg2000 (built without the `jpeg2000` feature)".into(),
    ))
}

/// JPEG 2000 codestream round trip through OpenJPEG.
///
/// The quality value is a fixed-quality target: a single layer whose PSNR
/// (in dB, on 8-bit data) should reach `quality`.
#[cfg(feature = "jpeg2000")]
pub(crate) mod j2k {
    use std::ffi::c_void;
    use std::ptr;

    use openjpeg_sys as opj;

    use crate::error::{Error, Result};
    use crate::image::ImageBuf;

    struct Codec(*mut opj::opj_codec_t);
    impl Drop for Codec {
        fn drop(&mut self) {
            if !self.0.is_null() {
                unsafe { opj::opj_destroy_codec(self.0) }
            }
        }
    }

    struct Stream(*mut opj::opj_stream_t);
    impl Drop for Stream {
        fn drop(&mut self) {
            if !self.0.is_null() {
                unsafe { opj::opj_stream_destroy(self.0) }
            }
        }
    }

    struct Image(*mut opj::opj_image_t);
    impl Drop for Image {
        fn drop(&mut self) {
            if !self.0.is_null() {
                unsafe { opj::opj_image_destroy(self.0) }
            }
        }
    }

    /// Seekable in-memory buffer shared with the C callbacks.
    struct Cursor {
        buf: Vec<u8>,
        pos: usize,
    }

    unsafe extern "C" fn write_fn(src: *mut c_void, n: usize, user: *mut c_void) -> usize {
        let cur = &mut *(user as *mut Cursor);
        let data = std::slice::from_raw_parts(src as *const u8, n);
        let end = cur.pos + n;
        if cur.buf.len() < end {
            cur.buf.resize(end, 0);
        }
        cur.buf[cur.pos..end].copy_from_slice(data);
        cur.pos = end;
        n
    }

    unsafe extern "C" fn read_fn(dst: *mut c_void, n: usize, user: *mut c_void) -> usize {
        let cur = &mut *(user as *mut Cursor);
        if cur.pos >= cur.buf.len() {
            return usize::MAX; // (OPJ_SIZE_T)-1 signals end of stream
        }
        let k = n.min(cur.buf.len() - cur.pos);
        ptr::copy_nonoverlapping(cur.buf.as_ptr().add(cur.pos), dst as *mut u8, k);
        cur.pos += k;
        k
    }

    unsafe extern "C" fn skip_fn(n: i64, user: *mut c_void) -> i64 {
        let cur = &mut *(user as *mut Cursor);
        let target = (cur.pos as i64 + n).max(0) as usize;
        cur.pos = target;
        n
    }

    unsafe extern "C" fn seek_fn(n: i64, user: *mut c_void) -> i32 {
        let cur = &mut *(user as *mut Cursor);
        if n < 0 {
            return 0;
        }
        cur.pos = n as usize;
        1
    }

    fn resolutions(w: usize, h: usize) -> i32 {
        let min = w.min(h).max(1) as f64;
        (min.log2().floor() as i32 + 1).clamp(1, 6)
    }

    pub fn encode(img: &ImageBuf, quality: f64) -> Result<Vec<u8>> {
        let (w, h) = (img.width(), img.height());
        let rgb8 = img.to_rgb8();
        let mut cursor = Cursor {
            buf: Vec::new(),
            pos: 0,
        };
        unsafe {
            let mut comp: [opj::opj_image_cmptparm_t; 3] = std::mem::zeroed();
            for c in &mut comp {
                c.dx = 1;
                c.dy = 1;
                c.w = w as u32;
                c.h = h as u32;
                c.prec = 8;
                c.sgnd = 0;
            }
            let image = Image(opj::opj_image_create(
                3,
                comp.as_mut_ptr(),
                opj::COLOR_SPACE::OPJ_CLRSPC_SRGB,
            ));
            if image.0.is_null() {
                return Err(Error::Codec("opj_image_create failed".into()));
            }
            (*image.0).x0 = 0;
            (*image.0).y0 = 0;
            (*image.0).x1 = w as u32;
            (*image.0).y1 = h as u32;
            let comps = std::slice::from_raw_parts_mut((*image.0).comps, 3);
            for (c, comp) in comps.iter_mut().enumerate() {
                let plane = std::slice::from_raw_parts_mut(comp.data, w * h);
                for (i, v) in plane.iter_mut().enumerate() {
                    *v = i32::from(rgb8[i * 3 + c]);
                }
            }

            let mut params: opj::opj_cparameters_t = std::mem::zeroed();
            opj::opj_set_default_encoder_parameters(&mut params);
            params.tcp_numlayers = 1;
            params.cp_fixed_quality = 1;
            params.tcp_distoratio[0] = quality as f32;
            params.irreversible = 1;
            params.tcp_mct = 1;
            params.numresolution = resolutions(w, h);

            let codec = Codec(opj::opj_create_compress(opj::CODEC_FORMAT::OPJ_CODEC_J2K));
            if codec.0.is_null() {
                return Err(Error::Codec("opj_create_compress failed".into()));
            }
            if opj::opj_setup_encoder(codec.0, &mut params, image.0) == 0 {
                return Err(Error::Codec("opj_setup_encoder failed".into()));
            }
            let stream = Stream(opj::opj_stream_create(1 << 16, 0));
            if stream.0.is_null() {
                return Err(Error::Codec("opj_stream_create failed".into()));
            }
            opj::opj_stream_set_write_function(stream.0, Some(write_fn));
            opj::opj_stream_set_skip_function(stream.0, Some(skip_fn));
            opj::opj_stream_set_seek_function(stream.0, Some(seek_fn));
            opj::opj_stream_set_user_data(stream.0, &mut cursor as *mut Cursor as *mut c_void, None);

            if opj::opj_start_compress(codec.0, image.0, stream.0) == 0
                || opj::opj_encode(codec.0, stream.0) == 0
                || opj::opj_end_compress(codec.0, stream.0) == 0
            {
                return Err(Error::Codec("jpeg2000 encoding failed".into()));
            }
            // Flush buffered output into the cursor before it is read.
            drop(stream);
        }
        Ok(cursor.buf)
    }

    pub fn decode(bytes: &[u8]) -> Result<ImageBuf> {
        let mut cursor = Cursor {
            buf: bytes.to_vec(),
            pos: 0,
        };
        unsafe {
            let codec = Codec(opj::opj_create_decompress(opj::CODEC_FORMAT::OPJ_CODEC_J2K));
            if codec.0.is_null() {
                return Err(Error::Codec("opj_create_decompress failed".into()));
            }
            let mut params: opj::opj_dparameters_t = std::mem::zeroed();
            opj::opj_set_default_decoder_parameters(&mut params);
            if opj::opj_setup_decoder(codec.0, &mut params) == 0 {
                return Err(Error::Codec("opj_setup_decoder failed".into()));
            }
            let stream = Stream(opj::opj_stream_create(1 << 16, 1));
            if stream.0.is_null() {
                return Err(Error::Codec("opj_stream_create failed".into()));
            }
            opj::opj_stream_set_read_function(stream.0, Some(read_fn));
            opj::opj_stream_set_skip_function(stream.0, Some(skip_fn));
            opj::opj_stream_set_seek_function(stream.0, Some(seek_fn));
            opj::opj_stream_set_user_data_length(stream.0, bytes.len() as u64);
            opj::opj_stream_set_user_data(stream.0, &mut cursor as *mut Cursor as *mut c_void, None);

            let mut raw: *mut opj::opj_image_t = ptr::null_mut();
            let ok = opj::opj_read_header(stream.0, codec.0, &mut raw);
            let image = Image(raw);
            if ok == 0 || image.0.is_null() {
                return Err(Error::Codec("jpeg2000 header could not be read".into()));
            }
            if opj::opj_decode(codec.0, stream.0, image.0) == 0
                || opj::opj_end_decompress(codec.0, stream.0) == 0
            {
                return Err(Error::Codec("jpeg2000 decoding failed".into()));
            }
            let im = &*image.0;
            if im.numcomps < 3 {
                return Err(Error::Codec(format!("expected 3 components, got {}", im.numcomps)));
            }
            let comps = std::slice::from_raw_parts(im.comps, 3);
            let (w, h) = (comps[0].w as usize, comps[0].h as usize);
            let mut data = vec![0.0; w * h * 3];
            for (c, comp) in comps.iter().enumerate() {
                if comp.w as usize != w || comp.h as usize != h || comp.data.is_null() {
                    return Err(Error::Codec("unexpected component layout".into()));
                }
                let max = ((1u32 << comp.prec) - 1) as f64;
                let plane = std::slice::from_raw_parts(comp.data, w * h);
                for (i, &v) in plane.iter().enumerate() {
                    data[i * 3 + c] = f64::from(v) / max;
                }
            }
            ImageBuf::new(w, h, data)
        }
    }
}
